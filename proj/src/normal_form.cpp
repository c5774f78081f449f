#include "cuspcount/normal_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuspcount {

namespace {

// Tracks M = left * A * right while A is reduced with elementary operations.
struct SmithState {
    IntMatrix a;
    IntMatrix u;     // u * M * v = a
    IntMatrix u_inv; // M = u_inv * a * v_inv
    IntMatrix v;
    IntMatrix v_inv;

    void swap_rows(std::size_t i, std::size_t j) {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        u_inv.swap_cols(i, j);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        v_inv.swap_rows(i, j);
    }
    void add_row(std::size_t dst, std::size_t src, const Integer& k) {
        a.add_row_multiple(dst, src, k);
        u.add_row_multiple(dst, src, k);
        u_inv.add_col_multiple(src, dst, -k);
    }
    void add_col(std::size_t dst, std::size_t src, const Integer& k) {
        a.add_col_multiple(dst, src, k);
        v.add_col_multiple(dst, src, k);
        v_inv.add_row_multiple(src, dst, -k);
    }
    void negate_row(std::size_t i) {
        a.negate_row(i);
        u.negate_row(i);
        u_inv.negate_col(i);
    }
};

Integer tdiv(const Integer& a, const Integer& b) {
    Integer q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer fdiv(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

IntVector SmithForm::invariant_factors() const {
    IntVector d;
    std::size_t n = std::min(diagonal.rows(), diagonal.cols());
    for (std::size_t i = 0; i < n; ++i)
        d.push_back(diagonal(i, i));
    return d;
}

SmithForm smith_normal_form(const IntMatrix& m) {
    const std::size_t nr = m.rows();
    const std::size_t nc = m.cols();
    SmithState s{m, IntMatrix::identity(nr), IntMatrix::identity(nr),
                 IntMatrix::identity(nc), IntMatrix::identity(nc)};
    auto& a = s.a;
    const std::size_t n = std::min(nr, nc);
    for (std::size_t t = 0; t < n; ++t) {
        bool finished = false;
        while (true) {
            std::size_t pi = nr, pj = nc;
            for (std::size_t i = t; i < nr; ++i)
                for (std::size_t j = t; j < nc; ++j)
                    if (a(i, j) != 0 &&
                        (pi == nr || abs(a(i, j)) < abs(a(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == nr) {
                finished = true;
                break;
            }
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            bool clear = true;
            for (std::size_t i = t + 1; i < nr; ++i) {
                if (a(i, t) == 0)
                    continue;
                s.add_row(i, t, -tdiv(a(i, t), a(t, t)));
                if (a(i, t) != 0)
                    clear = false;
            }
            for (std::size_t j = t + 1; j < nc; ++j) {
                if (a(t, j) == 0)
                    continue;
                s.add_col(j, t, -tdiv(a(t, j), a(t, t)));
                if (a(t, j) != 0)
                    clear = false;
            }
            if (!clear)
                continue;
            bool divisible = true;
            for (std::size_t i = t + 1; i < nr && divisible; ++i)
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        s.add_row(t, i, 1);
                        divisible = false;
                        break;
                    }
            if (divisible)
                break;
        }
        if (finished)
            break;
        if (a(t, t) < 0)
            s.negate_row(t);
    }
    return SmithForm{s.u_inv, s.a, s.v_inv, s.u, s.v};
}

HermiteForm hermite_normal_form(const IntMatrix& m) {
    IntMatrix a = m;
    IntMatrix w = IntMatrix::identity(m.rows());
    const std::size_t nr = m.rows();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < nr; ++c) {
        bool has_pivot = true;
        while (true) {
            std::size_t p = nr;
            for (std::size_t i = r; i < nr; ++i)
                if (a(i, c) != 0 && (p == nr || abs(a(i, c)) < abs(a(p, c))))
                    p = i;
            if (p == nr) {
                has_pivot = false;
                break;
            }
            a.swap_rows(r, p);
            w.swap_rows(r, p);
            bool clear = true;
            for (std::size_t i = r + 1; i < nr; ++i) {
                if (a(i, c) == 0)
                    continue;
                Integer q = -tdiv(a(i, c), a(r, c));
                a.add_row_multiple(i, r, q);
                w.add_row_multiple(i, r, q);
                if (a(i, c) != 0)
                    clear = false;
            }
            if (clear)
                break;
        }
        if (!has_pivot)
            continue;
        if (a(r, c) < 0) {
            a.negate_row(r);
            w.negate_row(r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = -fdiv(a(i, c), a(r, c));
            a.add_row_multiple(i, r, q);
            w.add_row_multiple(i, r, q);
        }
        ++r;
    }
    return HermiteForm{a, w, r};
}

IntMatrix kernel_basis(const IntMatrix& a) {
    const std::size_t n = a.cols();
    HermiteForm h = hermite_normal_form(a.transpose());
    std::vector<IntVector> rows;
    for (std::size_t i = h.rank; i < n; ++i)
        rows.push_back(h.transform.row(i));
    if (rows.empty())
        return IntMatrix(n, 0);
    HermiteForm canon = hermite_normal_form(IntMatrix::from_rows(rows));
    return canon.form.submatrix(0, 0, canon.rank, n).transpose();
}

IntMatrix canonical_column_basis(const IntMatrix& b) {
    if (b.cols() == 0)
        return IntMatrix(b.rows(), 0);
    HermiteForm h = hermite_normal_form(b.transpose());
    return h.form.submatrix(0, 0, h.rank, b.rows()).transpose();
}

IntMatrix saturation(const IntMatrix& b) {
    IntMatrix k = kernel_basis(b.transpose());
    return kernel_basis(k.transpose());
}

bool spans_primitive(const IntMatrix& b) {
    if (b.cols() == 0)
        return true;
    SmithForm s = smith_normal_form(b);
    for (const auto& d : s.invariant_factors())
        if (d != 0 && d != 1)
            return false;
    return true;
}

IntMatrix complete_to_unimodular(const IntVector& primitive) {
    const std::size_t n = primitive.size();
    if (content(primitive) != 1)
        throw std::invalid_argument("complete_to_unimodular: not primitive");
    IntMatrix col(n, 1);
    col.set_column(0, primitive);
    HermiteForm h = hermite_normal_form(col);
    auto inv = unimodular_inverse(h.transform);
    if (!inv)
        throw std::logic_error("HNF transform not unimodular");
    return *inv;
}

} // namespace cuspcount
