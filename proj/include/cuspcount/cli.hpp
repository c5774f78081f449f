#pragma once

#include "cuspcount/lattice.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cuspcount::cli {

/// Version of the JSON report layout in schema/report.schema.json.
inline constexpr const char* kSchemaVersion = "1.0";

/// Exit codes of run().
enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kValidationError = 2,
    kBudgetExceeded = 3,
};

/// Either a path to a JSON Gram file ({"gram": [[...]]} or a bare matrix)
/// or an expression
///   expr := term ('+' term)*
///   term := NAME ['(' INT (',' INT)* ')']
/// with NAME one of U, A, D, E8, diag. Whitespace is ignored. Throws
/// ParseError (with a byte offset) and the validation errors of the
/// lattice constructors.
EvenLattice parse_lattice_spec(std::string_view text,
                               const LatticeConfig& config = {});

/// Runs one command line (without the program name). Reports go to `out`;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cuspcount::cli
