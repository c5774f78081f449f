// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Expected values come from brute-force oracles or closed
// forms evaluated here, never from the library routine under test.

#include "cuspcount/cli.hpp"
#include "cuspcount/discriminant.hpp"
#include "cuspcount/fm_counting.hpp"
#include "cuspcount/genus.hpp"
#include "cuspcount/isotropic.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cuspcount;

namespace {

const std::vector<long> kGoldenR = {3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 16, 18, 20, 24, 30};

struct Outcome {
    bool passed = true;
    std::string detail;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (failures.size() < 5)
                failures.push_back(what);
        }
    }
};

oracle::Mat to_oracle(const IntMatrix& m) {
    oracle::Mat out(m.rows(), std::vector<long>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j).get_si();
    return out;
}

EvenLattice lattice(const std::string& spec) { return cli::parse_lattice_spec(spec); }

Integer abs_det(const EvenLattice& l) { return abs(l.det()); }

bool square_free(Integer n) {
    for (Integer p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0)
            return false;
    return true;
}

// gcd of the entries of G v, recomputed without the library's divisor().
Integer oracle_divisor(const EvenLattice& l, const IntVector& v) {
    Integer g = 0;
    for (const auto& x : l.gram() * v)
        g = gcd(g, x);
    return g;
}

// Criterion 1

Outcome golden_ur() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    for (long r : kGoldenR) {
        const UrReport rep = ur_example(r);
        const long phi = oracle::euler_phi(r);
        const long tau = oracle::distinct_primes(r);
        const std::string tag = "r=" + std::to_string(r) + " ";
        // 2^(tau-2) phi is integral since phi(r) is even for r > 2
        const std::uint64_t fm = (static_cast<std::uint64_t>(phi) << tau) / 4;
        const std::uint64_t fm_ell = (static_cast<std::uint64_t>(phi) << tau) / 2;
        o.expect(rep.genus_singleton, tag + "genus not singleton");
        o.expect(rep.elliptic_cusps_distinct, tag + "elliptic cusps coincide");
        o.expect(rep.fm.value == fm, tag + "#FM");
        o.expect(rep.fm_elliptic.value == fm_ell, tag + "#FM_ell");
        o.expect(rep.mu1_fiber.value == static_cast<std::uint64_t>(phi / 2), tag + "mu1 fiber");
        o.expect(rep.standard_cusps == (1ULL << tau), tag + "standard cusps");
        o.expect(rep.isotropic_cyclic_subgroups == (1ULL << tau),
                 tag + "isotropic cyclic subgroup count");
        for (const CountReport* c : {&rep.fm, &rep.fm_elliptic}) {
            o.expect(c->exact, tag + "inexact count");
            o.expect(c->route == CountRoute::DoubleCoset, tag + "FM count not by double cosets");
        }
        // the fiber is counted from discriminant actions of explicit isometries;
        // compare with a direct scan of the units modulo sign
        long unit_pairs = 0;
        for (long u = 1; u < r; ++u)
            if (std::gcd(u, r) == 1 && u <= r - u)
                ++unit_pairs;
        o.expect(rep.mu1_fiber.exact, tag + "inexact mu1 fiber");
        o.expect(static_cast<long>(rep.mu1_fiber.value) == unit_pairs, tag + "mu1 vs unit scan");
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.expect(seconds < 60.0, "runtime over 60 s");
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu values of r in %.2f s", kGoldenR.size(), seconds);
    o.detail = buf;
    return o;
}

// Criterion 2

Outcome aut_orders() {
    Outcome o;
    for (long r : kGoldenR) {
        const FiniteQuadraticForm a = discriminant_form(hyperbolic_plane(r));
        const auto direct = aut_group(a, {}, AutStrategy::Direct).order();
        const auto primes = aut_group(a, {}, AutStrategy::PrimaryDecomposition).order();
        const long expected = oracle::euler_phi(r) << oracle::distinct_primes(r);
        const long brute = oracle::aut_count_ur(r);
        const std::string tag = "r=" + std::to_string(r) + " ";
        o.expect(static_cast<long>(direct) == expected, tag + "direct enumeration");
        o.expect(static_cast<long>(primes) == expected, tag + "prime-power product");
        o.expect(brute == expected, tag + "matrix scan oracle");
    }
    o.detail = "whole group, prime-power product and matrix scan agree for " +
               std::to_string(kGoldenR.size()) + " values of r";
    return o;
}

// Criterion 3

Outcome genus_singleton() {
    Outcome o;
    for (long r = 1; r <= 12; ++r) {
        const EvenLattice ur = hyperbolic_plane(r);
        const GenusQuery query{{1, 1},
                               discriminant_form(ur),
                               minimal_search_bound({1, 1}, abs_det(ur))};
        const auto reps = genus_representatives_rank2(query);
        o.expect(reps.size() == 1, "r=" + std::to_string(r) + " genus size");
        if (reps.size() == 1)
            o.expect(equivalent_rank2(reps.front(), ur).has_value(),
                     "r=" + std::to_string(r) + " representative is not U(r)");
    }
    for (long r : kGoldenR)
        o.expect(nikulin_unique(direct_sum(hyperbolic_plane(r), hyperbolic_plane(1))),
                 "nikulin_unique(U(" + std::to_string(r) + ")+U)");
    o.detail = "genus of U(r) is {U(r)} for r <= 12; U(r)+U satisfies the uniqueness criterion";
    return o;
}

// Criterion 4

std::vector<EvenLattice> corpus() {
    std::vector<EvenLattice> out;
    for (const char* spec :
         {"U", "U(2)", "U(3)", "U(4)", "U(6)", "diag(2,-2)", "diag(2,-6)", "diag(4,-4)",
          "U+diag(-2)", "U+diag(-4)", "U+diag(-6)", "U+diag(-12)", "U(2)+diag(-2)",
          "U(3)+diag(-6)", "diag(2,-2,-2)", "U+U", "U+U(2)", "U(2)+U(2)", "U+U(3)",
          "U+A(2)", "U+diag(-2,-2)", "U(2)+diag(-2,-4)", "U+diag(2,-10)"})
        out.push_back(lattice(spec));
    std::mt19937_64 rng(4242);
    while (out.size() < 28) {
        const auto gram = oracle::random_even_gram(rng, 3, 3);
        std::vector<std::vector<long>> rows(gram.begin(), gram.end());
        const EvenLattice l = make_lattice(IntMatrix::from_rows(rows));
        if (is_indefinite(l) && abs_det(l) <= 60)
            out.push_back(l);
    }
    return out;
}

// Random element of O(L)^l: a word in transvections and block isometries
// built from the complement's own transvections and -id.
class StabilizerSampler {
  public:
    explicit StabilizerSampler(const HyperbolicSplit& split) : split_(split) {
        const std::size_t k = split.complement.rank();
        for (std::size_t j = 0; j < k; ++j) {
            const IntVector w = split.complement_basis.column(j);
            gens_.push_back(transvection(split, w));
            gens_.push_back(transvection(split, Integer(-1) * w));
        }
        gens_.push_back(
            block_isometry(split, LatticeIsometry{Integer(-1) * IntMatrix::identity(k)}));
        if (k >= 3 && is_indefinite(split.complement)) {
            const auto inner = enumerate_isotropic(split.complement, 2, Integer(1));
            if (!inner.vectors.empty()) {
                const HyperbolicSplit cs = hyperbolic_completion(split.complement,
                                                                 inner.vectors.front());
                for (std::size_t j = 0; j < cs.complement_basis.cols(); ++j)
                    gens_.push_back(block_isometry(
                        split, transvection(cs, cs.complement_basis.column(j))));
            }
        }
    }

    LatticeIsometry sample(std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, gens_.size() - 1);
        std::uniform_int_distribution<int> length(1, 6);
        LatticeIsometry g{IntMatrix::identity(split_.ambient.rank())};
        for (int i = length(rng); i > 0; --i)
            g = compose(g, gens_[pick(rng)]);
        return g;
    }

  private:
    const HyperbolicSplit& split_;
    std::vector<LatticeIsometry> gens_;
};

Outcome structural_properties() {
    Outcome o;
    const auto lattices = corpus();
    std::size_t vectors = 0, round_trips = 0, projection_pairs = 0, subgroups = 0;
    std::mt19937_64 rng(2718);

    for (const auto& l : lattices) {
        const std::string tag = to_string(l.gram()) + " ";
        const IsotropicWindow window = enumerate_isotropic(l, 4);
        const bool sf = square_free(abs_det(l));
        for (const auto& v : window.vectors) {
            ++vectors;
            const Integer d = oracle_divisor(l, v.vector);
            o.expect(l.norm(v.vector) == 0 && content(v.vector) == 1, tag + "not primitive isotropic");
            o.expect(d == v.divisor, tag + "divisor");
            const EvenLattice q = quotient_lattice(l, v);
            o.expect(d * d * abs_det(q) == abs_det(l), tag + "d^2 |A_quotient| != |A_L|");
            if (sf)
                o.expect(d == 1, tag + "square-free det with divisor > 1");
        }

        // transvection laws, stabilizer round trips, projections
        const auto div_one = enumerate_isotropic(l, 2, Integer(1));
        if (l.rank() >= 3 && !div_one.vectors.empty()) {
            const IsotropicVector& v = div_one.vectors.front();
            const HyperbolicSplit split = hyperbolic_completion(l, v);
            const std::size_t k = split.complement.rank();
            const FqfIsometry id = identity_isometry(discriminant_form(l));
            std::uniform_int_distribution<long> coef(-2, 2);
            auto random_w = [&] {
                IntVector c(k);
                for (auto& x : c)
                    x = coef(rng);
                return split.complement_basis * c;
            };
            for (int trial = 0; trial < 6; ++trial) {
                const IntVector w1 = random_w(), w2 = random_w();
                const LatticeIsometry t1 = transvection(split, w1);
                const LatticeIsometry t2 = transvection(split, w2);
                o.expect(is_isometry(l, l, t1.matrix), tag + "transvection not isometry");
                o.expect(t1.matrix * v.vector == v.vector, tag + "transvection moves l");
                o.expect(compose(t1, t2) == transvection(split, w1 + w2),
                         tag + "T_v T_w != T_(v+w)");
                o.expect(natural_map(l, t1) == id, tag + "transvection acts on A_L");
            }

            const StabilizerSampler sampler(split);
            for (int trial = 0; trial < 12; ++trial) {
                const LatticeIsometry g = sampler.sample(rng);
                const StabilizerParts parts = stabilizer_decompose(split, g);
                o.expect(compose(block_isometry(split, parts.complement_isometry),
                                 transvection(split, parts.translation)) == g,
                         tag + "stabilizer round trip");
                ++round_trips;
            }

            // phi(U) with columns (e, f): f = l, e = companion moved by O(L)^l
            const IntMatrix base = IntMatrix::from_columns({split.companion, v.vector},
                                                           l.rank());
            for (int trial = 0; trial < 8; ++trial) {
                const IntMatrix a = sampler.sample(rng).matrix * base;
                const IntMatrix b = sampler.sample(rng).matrix * base;
                const ComplementIsometry p =
                    projection_isometry(l, make_embedding(l, a), make_embedding(l, b));
                o.expect(is_isometry(p.source, p.target, p.map.matrix),
                         tag + "projection is not an isometry");
                o.expect(p.map.matrix.transpose() * p.target.gram() * p.map.matrix ==
                             p.source.gram(),
                         tag + "projection Gram check");
                ++projection_pairs;
            }
        }

        // overlattice law
        const FiniteQuadraticForm a = discriminant_form(l);
        for (std::uint64_t h = 2; h * h <= a.order(); ++h) {
            if (a.order() % (h * h) != 0)
                continue;
            for (const auto& sub : isotropic_subgroups(a, h)) {
                const EvenLattice over = overlattice(l, sub.generators);
                o.expect(Integer(static_cast<unsigned long>(a.order())) ==
                             Integer(static_cast<unsigned long>(h * h)) * abs_det(over),
                         tag + "overlattice law");
                ++subgroups;
            }
        }
    }
    o.expect(lattices.size() >= 20, "corpus too small");
    o.expect(round_trips >= 100, "fewer than 100 stabilizer round trips");
    o.expect(projection_pairs >= 50, "fewer than 50 projection pairs");
    o.detail = std::to_string(lattices.size()) + " lattices, " + std::to_string(vectors) +
               " isotropic vectors, " + std::to_string(round_trips) + " round trips, " +
               std::to_string(projection_pairs) + " projection pairs, " +
               std::to_string(subgroups) + " isotropic subgroups";
    return o;
}

// Criterion 5

Outcome route_consistency() {
    Outcome o;
    for (const char* spec : {"U+diag(-2)", "U+diag(-4)", "U+diag(-6)"}) {
        const EvenLattice ns = lattice(spec);
        const RouteCrosscheck check = route_crosscheck(K3Model::generic(ns));
        const std::string tag = std::string(spec) + " ";
        o.expect(check.passed, tag + "crosscheck");
        o.expect(check.fm.value == 1 && check.fm.exact, tag + "#FM != 1");
        const auto classes = oracle::dual_classes(to_oracle(ns.gram()));
        for (const auto& [d, report] : check.cusps) {
            o.expect(report.exact, tag + "inexact cusp count");
            o.expect(static_cast<long>(report.value) ==
                         oracle::isotropic_classes_up_to_sign(classes, d),
                     tag + "cusps at d=" + std::to_string(d));
            if (d == 1)
                o.expect(report.value == 1, tag + "cusp count at d=1");
        }
    }
    o.detail = "U+<-2>, U+<-4>, U+<-6>: #FM = 1 and per-d cusps match the orbit oracle";
    return o;
}

// Criterion 6

Outcome twisted_u2() {
    Outcome o;
    const EvenLattice u2 = hyperbolic_plane(2);
    const K3Model model = K3Model::generic(u2);
    const auto classes = oracle::dual_classes(to_oracle(u2.gram()));
    const long oracle2 = oracle::isotropic_classes_up_to_sign(classes, 2);
    const long oracle4 = oracle::isotropic_classes_up_to_sign(classes, 4);
    const CountReport at2 = count_cusps_zero_dim(model, 2);
    const CountReport at4 = count_cusps_zero_dim(model, 4);
    o.expect(oracle2 == 2 && oracle4 == 0, "oracle disagrees with the expected 2 and 0");
    o.expect(static_cast<long>(at2.value) == oracle2 && at2.exact, "d=2");
    o.expect(static_cast<long>(at4.value) == oracle4 && at4.exact, "d=4");
    o.detail = "d=2: " + std::to_string(at2.value) + ", d=4: " + std::to_string(at4.value) +
               " (oracle " + std::to_string(oracle2) + ", " + std::to_string(oracle4) + ")";
    return o;
}

// Criterion 7

std::string suite_json() {
    const std::vector<std::vector<std::string>> commands = {
        {"verify-ur", "--r", "3", "--max-r", "30"},
        {"disc", "U(4)"},
        {"aut", "U(12)"},
        {"isogenus", "U(6)+U", "U(3)+U(2)"},
        {"isotropic", "U+diag(-6)", "--bound", "3"},
        {"genus", "--disc", "diag(-2,-10)"},
        {"fm", "count", "U(30)"},
        {"fm", "twisted", "--d", "2", "U(2)"},
        {"fm", "elliptic", "U+diag(-6)"},
        {"fm", "elliptic", "--section", "U+diag(-6)"},
        {"cusps", "--div", "2", "U+diag(-4)"},
        {"transvect", "U+U+diag(-2)", "--isotropic", "1,0,0,0,0"},
        {"classify-i1", "U+U(2)", "--bound", "2"},
    };
    std::ostringstream all;
    for (const auto& args : commands) {
        std::ostringstream err;
        const int code = cli::run(args, all, err);
        all << "exit " << code << '\n';
    }
    return all.str();
}

Outcome determinism() {
    Outcome o;
    const std::string first = suite_json();
    const std::string second = suite_json();
    o.expect(first == second, "JSON output differs between runs");
    o.expect(first.find("\"error\"") == std::string::npos, "a suite command failed");
    o.detail = std::to_string(first.size()) + " bytes identical across two runs";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 U(r) golden suite", golden_ur},
        {"2 automorphism order two ways", aut_orders},
        {"3 genus singleton", genus_singleton},
        {"4 structural properties", structural_properties},
        {"5 cusp/FM route consistency", route_consistency},
        {"6 twisted counts for U(2)", twisted_u2},
        {"7 determinism", determinism},
    };
    bool all = true;
    for (const auto& [name, check] : criteria) {
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.failures.push_back(std::string("exception: ") + e.what());
        }
        all = all && outcome.passed;
        std::cout << (outcome.passed ? "PASS" : "FAIL") << "  criterion " << name
                  << ": " << outcome.detail << '\n';
        for (const auto& f : outcome.failures)
            std::cout << "      " << f << '\n';
    }
    return all ? 0 : 1;
}
