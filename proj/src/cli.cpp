#include "cuspcount/cli.hpp"

#include "cuspcount/discriminant.hpp"
#include "cuspcount/fm_counting.hpp"
#include "cuspcount/genus.hpp"
#include "cuspcount/isotropic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace cuspcount::cli {

namespace {

using nlohmann::json;

// Lattice expressions

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

class SpecParser {
  public:
    SpecParser(std::string_view text, const LatticeConfig& config)
        : text_(text), config_(config) {}

    EvenLattice parse() {
        skip_space();
        if (at_end())
            throw ParseError(pos_, "empty lattice expression");
        EvenLattice result = term();
        std::string name = last_term_;
        while (true) {
            skip_space();
            if (at_end())
                break;
            if (text_[pos_] != '+')
                throw ParseError(pos_, "expected '+'");
            ++pos_;
            result = direct_sum(result, term());
            name += "+" + last_term_;
        }
        return result.with_name(name);
    }

  private:
    EvenLattice term() {
        skip_space();
        const std::size_t start = pos_;
        if (at_end() || !is_name_start(text_[pos_]))
            throw ParseError(pos_, "expected a lattice name");
        while (!at_end() && is_name_char(text_[pos_]))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name != "U" && name != "A" && name != "D" && name != "E8" &&
            name != "diag")
            throw ParseError(start, "unknown lattice name '" + name + "'");

        std::vector<long> params;
        skip_space();
        if (!at_end() && text_[pos_] == '(') {
            ++pos_;
            do {
                skip_space();
                params.push_back(integer());
                skip_space();
            } while (consume(','));
            if (!consume(')'))
                throw ParseError(pos_, "expected ')'");
        }
        last_term_ = name;
        if (!params.empty()) {
            last_term_ += "(";
            for (std::size_t i = 0; i < params.size(); ++i)
                last_term_ += (i ? "," : "") + std::to_string(params[i]);
            last_term_ += ")";
        }
        return named_lattice(name, params, config_);
    }

    long integer() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        if (end < text_.size() && (text_[end] == '-' || text_[end] == '+'))
            ++end;
        const std::size_t digits = end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end])))
            ++end;
        if (end == digits)
            throw ParseError(start, "expected an integer");
        long value = 0;
        const char* first = text_.data() + start + (text_[start] == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(first, text_.data() + end, value);
        if (ec != std::errc{} || ptr != text_.data() + end)
            throw ParseError(start, "integer out of range");
        pos_ = end;
        return value;
    }

    bool consume(char c) {
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }

    std::string_view text_;
    const LatticeConfig& config_;
    std::size_t pos_ = 0;
    std::string last_term_;
};

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::BadParams, "cannot read " + path.string());
    const std::string content((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    try {
        return json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte > 0 ? e.byte - 1 : 0,
                         path.string() + ": malformed JSON");
    }
}

Integer integer_from_json(const json& value) {
    if (value.is_number_integer())
        return Integer(value.get<long>());
    if (value.is_string()) {
        Integer out;
        if (out.set_str(value.get<std::string>(), 10) == 0)
            return out;
    }
    throw ParseError(0, "Gram entries must be integers");
}

EvenLattice lattice_from_json(const json& doc) {
    const json* gram = &doc;
    std::string name;
    if (doc.is_object()) {
        if (!doc.contains("gram"))
            throw ParseError(0, "lattice file needs a \"gram\" field");
        gram = &doc.at("gram");
        if (doc.contains("name") && doc.at("name").is_string())
            name = doc.at("name").get<std::string>();
    }
    if (!gram->is_array())
        throw ParseError(0, "Gram matrix must be an array of rows");
    const std::size_t n = gram->size();
    std::vector<IntVector> rows;
    for (const json& row : *gram) {
        if (!row.is_array() || row.size() != n)
            throw ParseError(0, "Gram matrix must be square");
        IntVector entries;
        for (const json& entry : row)
            entries.push_back(integer_from_json(entry));
        rows.push_back(std::move(entries));
    }
    EvenLattice l = make_lattice(n == 0 ? IntMatrix() : IntMatrix::from_rows(rows));
    return name.empty() ? l : l.with_name(name);
}

// JSON rendering

json to_json(const Integer& x) {
    if (x.fits_slong_p())
        return x.get_si();
    return x.get_str();
}

json to_json(const Rational& x) { return x.get_str(); }

json to_json(const IntVector& v) {
    json out = json::array();
    for (const auto& x : v)
        out.push_back(to_json(x));
    return out;
}

json to_json(const IntMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        out.push_back(to_json(m.row(i)));
    return out;
}

json to_json(const EvenLattice& l) {
    const Signature s = signature(l);
    return {{"name", l.name()},
            {"rank", l.rank()},
            {"gram", to_json(l.gram())},
            {"det", to_json(l.det())},
            {"signature", {s.positive, s.negative}}};
}

json to_json(const FiniteQuadraticForm& a) {
    json q = json::array();
    json b = json::array();
    for (std::size_t i = 0; i < a.num_generators(); ++i) {
        q.push_back(to_json(a.q_value(i)));
        json row = json::array();
        for (std::size_t j = 0; j < a.num_generators(); ++j)
            row.push_back(to_json(a.b_value(i, j)));
        b.push_back(std::move(row));
    }
    return {{"invariant_factors", a.invariant_factors()},
            {"order", a.order()},
            {"exponent", a.exponent()},
            {"q", std::move(q)},
            {"b", std::move(b)}};
}

json to_json(const FqfIsometry& g) { return to_matrix(g); }

json to_json(const CountReport& r) {
    return {{"value", r.value},
            {"route", to_string(r.route)},
            {"exact", r.exact},
            {"window_note", r.window_note}};
}

json to_json(const IsotropicVector& v) {
    return {{"vector", to_json(v.vector)}, {"divisor", to_json(v.divisor)}};
}

// Table mode flattens the report into "path: value" lines.
void flatten(const json& node, const std::string& path, std::ostream& out) {
    auto scalar_array = [](const json& a) {
        return std::all_of(a.begin(), a.end(),
                           [](const json& x) { return x.is_primitive(); });
    };
    if (node.is_object()) {
        for (const auto& [key, value] : node.items())
            flatten(value, path.empty() ? key : path + "." + key, out);
    } else if (node.is_array() && !scalar_array(node)) {
        for (std::size_t i = 0; i < node.size(); ++i)
            flatten(node[i], path + "[" + std::to_string(i) + "]", out);
    } else if (node.is_string()) {
        out << path << ": " << node.get<std::string>() << '\n';
    } else {
        out << path << ": " << node.dump() << '\n';
    }
}

// Commands

struct Settings {
    bool table = false;
    std::optional<std::uint64_t> budget;
    bool positive_roots = false;

    EnumerationBudget enumeration_budget() const {
        EnumerationBudget b = EnumerationBudget::from_environment();
        if (budget)
            b.max_group_order = *budget;
        return b;
    }
    LatticeConfig lattice_config() const {
        return {positive_roots ? RootSign::Positive : RootSign::Negative};
    }
};

IntVector parse_vector(const std::string& text) {
    std::string body = text;
    if (!body.empty() && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    IntVector out;
    std::stringstream ss(body);
    std::string item;
    std::size_t offset = 0;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        Integer x;
        if (first == std::string::npos ||
            x.set_str(item.substr(first, last - first + 1), 10) != 0)
            throw ParseError(offset, "expected an integer vector");
        out.push_back(x);
        offset += item.size() + 1;
    }
    if (out.empty())
        throw ParseError(0, "expected an integer vector");
    return out;
}

K3Model load_model(const EvenLattice& ns, const std::string& hodge_file,
                   const EnumerationBudget& budget) {
    if (hodge_file.empty())
        return K3Model::generic(ns);
    const FiniteQuadraticForm form = discriminant_form(ns);
    const json doc = read_json_file(hodge_file);
    const json& list = doc.is_object() ? doc.at("generators") : doc;
    std::vector<FqfIsometry> gens{negation_isometry(form)};
    for (const json& m : list) {
        auto matrix = m.get<std::vector<std::vector<std::int64_t>>>();
        FqfIsometry g = from_matrix(form, matrix);
        if (!is_automorphism(form, g, budget))
            throw Error(ErrorKind::BadParams,
                        "Hodge generator is not an automorphism of A_NS");
        gens.push_back(std::move(g));
    }
    return K3Model::with_hodge_image(
        ns, FqfSubgroup::generated_by(form, std::move(gens), budget));
}

json model_fields(const K3Model& model) {
    return {{"lattice", to_json(model.ns())},
            {"hodge_image_order", model.hodge_image().order()}};
}

json merge(json base, const json& extra) {
    for (const auto& [key, value] : extra.items())
        base[key] = value;
    return base;
}

json ur_json(const UrReport& r) {
    const auto& e = r.expected;
    return {
        {"r", r.r},
        {"passed", r.passed},
        {"items",
         {{"genus_singleton", r.genus_singleton},
          {"fm", to_json(r.fm)},
          {"elliptic_cusps_distinct", r.elliptic_cusps_distinct},
          {"fm_elliptic", to_json(r.fm_elliptic)},
          {"mu1_fiber", to_json(r.mu1_fiber)},
          {"standard_cusps", r.standard_cusps}}},
        {"summary", "(" + std::to_string(r.fm.value) + ", " +
                        (r.elliptic_cusps_distinct ? "distinct" : "equal") +
                        ", " + std::to_string(r.fm_elliptic.value) + ", " +
                        std::to_string(r.mu1_fiber.value) + ", " +
                        std::to_string(r.standard_cusps) + ")"},
        {"cross_checks",
         {{"isotropic_cyclic_subgroups", r.isotropic_cyclic_subgroups},
          {"aut_order_direct", r.aut_order_direct},
          {"aut_order_by_primes", r.aut_order_by_primes}}},
        {"expected",
         {{"tau", e.tau},
          {"phi", e.phi},
          {"fm", e.fm},
          {"fm_elliptic", e.fm_elliptic},
          {"mu1_fiber", e.mu1_fiber},
          {"standard_cusps", e.standard_cusps},
          {"aut_order", e.aut_order}}}};
}

int emit(const json& report, const Settings& settings, std::ostream& out) {
    if (settings.table)
        flatten(report, "", out);
    else
        out << report.dump(2) << '\n';
    return kSuccess;
}

int report_error(const std::string& command, const std::string& kind,
                 const std::string& message, int code, const Settings& settings,
                 std::ostream& out, std::ostream& err) {
    err << "error: " << message << '\n';
    if (!settings.table) {
        json report = {{"schema_version", kSchemaVersion},
                       {"command", command},
                       {"error", {{"kind", kind}, {"message", message}}}};
        out << report.dump(2) << '\n';
    }
    return code;
}

} // namespace

EvenLattice parse_lattice_spec(std::string_view text, const LatticeConfig& config) {
    std::error_code ec;
    const std::filesystem::path path{std::string(text)};
    if (!text.empty() && std::filesystem::is_regular_file(path, ec))
        return lattice_from_json(read_json_file(path));
    return SpecParser(text, config).parse();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings settings;
    CLI::App app{"Exact lattice computations for Fourier-Mukai partner and cusp counts",
                 "cuspcount"};
    app.require_subcommand(1);
    app.add_flag("--table", settings.table, "Human-readable output instead of JSON");
    app.add_flag("--json", "JSON output (default)");
    app.add_option("--budget", settings.budget,
                   "Maximum discriminant group order to enumerate")
        ->check(CLI::PositiveNumber);
    app.add_flag("--positive-roots", settings.positive_roots,
                 "Use positive-definite A, D, E8");

    auto add_command = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        return sub;
    };

    // Every command stores its action here; it runs after parsing succeeds.
    std::function<json()> action;
    std::string command;
    bool check_failed = false;

    std::string spec, spec2, hodge_file, strategy = "primary", mode, sign;
    std::string isotropic_text, vector_text;
    long bound = 2;
    std::optional<long> genus_bound;
    std::optional<std::int64_t> divisor_filter;
    std::int64_t d = 1;
    bool section = false;
    long r = 0;
    std::optional<long> max_r;

    auto lattice = [&](const std::string& text) {
        return parse_lattice_spec(text, settings.lattice_config());
    };

    CLI::App* disc = add_command("disc", "Discriminant form of a lattice");
    disc->add_option("lattice", spec, "Lattice expression or JSON file")->required();
    disc->callback([&] {
        command = "disc";
        action = [&] {
            const EvenLattice l = lattice(spec);
            return json{{"lattice", to_json(l)},
                        {"discriminant", to_json(discriminant_form(l))}};
        };
    });

    CLI::App* aut = add_command("aut", "Orthogonal group of the discriminant form");
    aut->add_option("lattice", spec)->required();
    aut->add_option("--strategy", strategy)
        ->check(CLI::IsMember({"primary", "direct"}));
    aut->callback([&] {
        command = "aut";
        action = [&] {
            const EvenLattice l = lattice(spec);
            const FiniteQuadraticForm a = discriminant_form(l);
            const FqfSubgroup group =
                aut_group(a, settings.enumeration_budget(),
                          strategy == "direct" ? AutStrategy::Direct
                                               : AutStrategy::PrimaryDecomposition);
            json gens = json::array();
            for (const auto& g : group.generators())
                gens.push_back(to_json(g));
            return json{{"lattice", to_json(l)},
                        {"discriminant", to_json(a)},
                        {"strategy", strategy},
                        {"order", group.order()},
                        {"generators", std::move(gens)}};
        };
    });

    CLI::App* isogenus = add_command("isogenus", "Decide whether two lattices share a genus");
    isogenus->add_option("first", spec)->required();
    isogenus->add_option("second", spec2)->required();
    isogenus->callback([&] {
        command = "isogenus";
        action = [&] {
            const EvenLattice l = lattice(spec);
            const EvenLattice m = lattice(spec2);
            const IsogenusResult res = is_isogenus(l, m, settings.enumeration_budget());
            return json{{"lattices", {to_json(l), to_json(m)}},
                        {"isogenus", res.isogenus},
                        {"reason", res.reason},
                        {"witness", res.witness ? to_json(*res.witness) : json()}};
        };
    });

    CLI::App* isotropic = add_command("isotropic", "Primitive isotropic vectors in a box");
    isotropic->add_option("lattice", spec)->required();
    isotropic->add_option("--bound", bound, "Max |coordinate|")->check(CLI::PositiveNumber);
    isotropic->add_option("--div", divisor_filter, "Keep vectors of this divisor")
        ->check(CLI::PositiveNumber);
    isotropic->callback([&] {
        command = "isotropic";
        action = [&] {
            const EvenLattice l = lattice(spec);
            std::optional<Integer> filter;
            if (divisor_filter)
                filter = Integer(static_cast<long>(*divisor_filter));
            const IsotropicWindow window = enumerate_isotropic(l, bound, filter);
            json vectors = json::array();
            for (const auto& v : window.vectors) {
                json entry = to_json(v);
                const EvenLattice quotient = quotient_lattice(l, v);
                entry["quotient"] = to_json(quotient);
                entry["div_square_identity"] = check_div_square(l, v);
                vectors.push_back(std::move(entry));
            }
            return json{{"lattice", to_json(l)},
                        {"bound", bound},
                        {"window_note", window.window_note()},
                        {"count", window.vectors.size()},
                        {"vectors", std::move(vectors)}};
        };
    });

    CLI::App* transvect = add_command("transvect", "Eichler transvection for an isotropic vector");
    transvect->add_option("lattice", spec)->required();
    transvect->add_option("--isotropic", isotropic_text, "Divisor-1 isotropic vector, e.g. 0,1,0")
        ->required();
    transvect->add_option("--vector", vector_text,
                          "Vector orthogonal to the hyperbolic plane (ambient coordinates)");
    transvect->callback([&] {
        command = "transvect";
        action = [&] {
            const EvenLattice l = lattice(spec);
            const IsotropicVector v = make_isotropic(l, parse_vector(isotropic_text));
            const HyperbolicSplit split = hyperbolic_completion(l, v);
            std::vector<IntVector> translations;
            if (!vector_text.empty())
                translations.push_back(parse_vector(vector_text));
            else
                for (std::size_t j = 0; j < split.complement_basis.cols(); ++j)
                    translations.push_back(split.complement_basis.column(j));
            const Discriminant disc_l(l);
            json list = json::array();
            for (const auto& w : translations) {
                const LatticeIsometry t = transvection(split, w);
                list.push_back({{"vector", to_json(w)},
                                {"matrix", to_json(t.matrix)},
                                {"fixes_isotropic", t.matrix * v.vector == v.vector},
                                {"trivial_on_discriminant",
                                 natural_map(l, t) == identity_isometry(disc_l.form())}});
            }
            return json{{"lattice", to_json(l)},
                        {"isotropic", to_json(v)},
                        {"companion", to_json(split.companion)},
                        {"complement_basis", to_json(split.complement_basis)},
                        {"transvections", std::move(list)}};
        };
    });

    CLI::App* classify = add_command("classify-i1", "Group divisor-1 isotropic vectors by quotient");
    classify->add_option("lattice", spec)->required();
    classify->add_option("--bound", bound)->check(CLI::PositiveNumber);
    classify->callback([&] {
        command = "classify-i1";
        action = [&] {
            const EvenLattice l = lattice(spec);
            const I1Classification c = classify_I1_orbits(l, bound);
            json classes = json::array();
            for (const auto& cls : c.classes) {
                json members = json::array();
                for (const auto& v : cls.members)
                    members.push_back(to_json(v));
                classes.push_back({{"quotient", to_json(cls.quotient)},
                                   {"members", std::move(members)}});
            }
            return json{{"lattice", to_json(l)},
                        {"bound", c.bound},
                        {"window_note", c.window_note()},
                        {"isometry_certified", c.isometry_certified},
                        {"classes", std::move(classes)}};
        };
    });

    CLI::App* genus = add_command("genus", "Rank-2 genus representatives");
    genus->add_option("--disc", spec, "Lattice whose discriminant form is the target")
        ->required();
    genus->add_option("--sign", sign, "Signature p,q (defaults to that of --disc)");
    genus->add_option("--bound", genus_bound, "Search bound on |Gram entries|")
        ->check(CLI::PositiveNumber);
    genus->callback([&] {
        command = "genus";
        action = [&] {
            const EvenLattice l = lattice(spec);
            GenusQuery query{signature(l), discriminant_form(l), 0};
            if (!sign.empty()) {
                const IntVector pq = parse_vector(sign);
                if (pq.size() != 2 || pq[0] < 0 || pq[1] < 0)
                    throw Error(ErrorKind::BadParams, "--sign expects p,q");
                query.signature = {pq[0].get_ui(), pq[1].get_ui()};
            }
            query.search_bound = genus_bound.value_or(
                minimal_search_bound(query.signature, abs(l.det())));
            const auto reps =
                genus_representatives_rank2(query, settings.enumeration_budget());
            json list = json::array();
            for (const auto& m : reps)
                list.push_back(to_json(m));
            return json{{"signature",
                         {query.signature.positive, query.signature.negative}},
                        {"discriminant", to_json(query.target_form)},
                        {"search_bound", query.search_bound},
                        {"count", reps.size()},
                        {"representatives", std::move(list)}};
        };
    });

    CLI::App* fm = add_command("fm", "Fourier-Mukai partner counts");
    fm->add_option("mode", mode)->required()->check(
        CLI::IsMember({"count", "twisted", "elliptic"}));
    fm->add_option("lattice", spec, "Neron-Severi lattice")->required();
    fm->add_option("--d", d, "Order for twisted counts")->check(CLI::PositiveNumber);
    fm->add_flag("--section", section, "Count elliptic fibrations with a section");
    fm->add_option("--bound", bound, "Isotropic search window")->check(CLI::PositiveNumber);
    fm->add_option("--hodge", hodge_file, "JSON file of Hodge image generators")
        ->check(CLI::ExistingFile);
    fm->callback([&] {
        command = "fm";
        action = [&] {
            const EnumerationBudget budget = settings.enumeration_budget();
            const K3Model model = load_model(lattice(spec), hodge_file, budget);
            CountReport report;
            json extra = {{"mode", mode}};
            if (mode == "count") {
                report = count_fm(model, budget);
            } else if (mode == "twisted") {
                report = count_cusps_zero_dim(model, d, budget);
                extra["d"] = d;
            } else {
                report = section ? count_fm_elliptic_sec(model, bound, budget)
                                 : count_fm_elliptic(model, bound, budget);
                extra["section"] = section;
                extra["bound"] = bound;
            }
            return merge(merge(model_fields(model), extra), to_json(report));
        };
    });

    CLI::App* cusps = add_command("cusps", "0-dimensional cusps of a given divisor");
    cusps->add_option("lattice", spec, "Neron-Severi lattice")->required();
    cusps->add_option("--div", d)->required()->check(CLI::PositiveNumber);
    cusps->add_option("--hodge", hodge_file)->check(CLI::ExistingFile);
    cusps->callback([&] {
        command = "cusps";
        action = [&] {
            const EnumerationBudget budget = settings.enumeration_budget();
            const K3Model model = load_model(lattice(spec), hodge_file, budget);
            return merge(merge(model_fields(model), {{"d", d}}),
                         to_json(count_cusps_zero_dim(model, d, budget)));
        };
    });

    CLI::App* verify = add_command("verify-ur", "Check the U(r) counts by enumeration");
    verify->add_option("--r", r)->required();
    verify->add_option("--max-r", max_r, "Sweep r..max-r");
    verify->callback([&] {
        command = "verify-ur";
        action = [&] {
            const long last = max_r.value_or(r);
            if (last < r)
                throw Error(ErrorKind::BadParams, "--max-r must be >= --r");
            const EnumerationBudget budget = settings.enumeration_budget();
            json reports = json::array();
            bool all_passed = true;
            for (long k = r; k <= last; ++k) {
                const UrReport report = ur_example(k, budget);
                all_passed = all_passed && report.passed;
                reports.push_back(ur_json(report));
            }
            check_failed = !all_passed;
            return json{{"passed", all_passed}, {"reports", std::move(reports)}};
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report_error(command.empty() ? "" : command, "Usage", e.what(),
                            kValidationError, settings, out, err);
    } catch (const Error& e) {
        return report_error(command, to_string(e.kind()), e.what(),
                            e.kind() == ErrorKind::BudgetExceeded ? kBudgetExceeded
                                                                  : kValidationError,
                            settings, out, err);
    }

    try {
        json report = action();
        report["schema_version"] = kSchemaVersion;
        report["command"] = command;
        emit(report, settings, out);
        return check_failed ? kCheckFailed : kSuccess;
    } catch (const Error& e) {
        return report_error(command, to_string(e.kind()), e.what(),
                            e.kind() == ErrorKind::BudgetExceeded ? kBudgetExceeded
                                                                  : kValidationError,
                            settings, out, err);
    } catch (const std::invalid_argument& e) {
        return report_error(command, "InvalidArgument", e.what(), kValidationError,
                            settings, out, err);
    } catch (const json::exception& e) {
        return report_error(command, "ParseError", e.what(), kValidationError,
                            settings, out, err);
    }
}

} // namespace cuspcount::cli
