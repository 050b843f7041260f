#pragma once

// Exact computation of the degree-bounded polynomial centralizer of a planar
// field F: all fields G with deg G <= d and [F, G] = 0. The bracket is
// linear in G, so the solution set is the nullspace of an exact rational
// matrix whose columns are the coefficients of G's two components and whose
// rows are the monomials appearing in either bracket component. Solved by
// fraction-preserving Gauss-Jordan elimination; every returned basis element
// is re-verified against the bracket before it leaves this module.

#include "isochron/errors.hpp"
#include "isochron/field.hpp"
#include "isochron/poly2.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace isochron {

// Monomials of total degree <= d in canonical (grlex ascending) order.
inline std::vector<Monomial> monomials_up_to(int d) {
    std::vector<Monomial> out;
    for (int t = 0; t <= d; ++t)
        for (int i = t; i >= 0; --i) out.push_back({static_cast<unsigned>(i), static_cast<unsigned>(t - i)});
    return out;
}

struct LinearSystem {
    int degree_bound = 0;
    std::vector<Monomial> unknowns;           // coefficient slots for r, then again for s
    std::vector<std::vector<Rational>> rows;  // one per (bracket component, row monomial)
};

// Assemble the constraint matrix for [F, (r, s)] = 0 over all (r, s) with
// total degree <= d.
inline LinearSystem build_system(const VectorField& F, int d) {
    if (d < 0) throw PreconditionViolated("build_system: degree bound must be >= 0");
    LinearSystem sys;
    sys.degree_bound = d;
    sys.unknowns = monomials_up_to(d);
    const std::size_t n = sys.unknowns.size();

    const int row_deg = d + F.degree() - 1;  // max total degree of any bracket term
    if (F.is_zero() || row_deg < 0) return sys;  // no constraints

    const std::vector<Monomial> row_monos = monomials_up_to(row_deg);
    std::map<Monomial, std::size_t, GrlexLess> row_index;
    for (std::size_t k = 0; k < row_monos.size(); ++k) row_index.emplace(row_monos[k], k);
    const std::size_t m = row_monos.size();
    sys.rows.assign(2 * m, std::vector<Rational>(2 * n, Rational(0)));

    const Poly2 px = F.p.diff(Var::x), py = F.p.diff(Var::y);
    const Poly2 qx = F.q.diff(Var::x), qy = F.q.diff(Var::y);

    auto scatter = [&](const Poly2& contribution, std::size_t component, std::size_t col) {
        for (const auto& [mono, c] : contribution.terms()) {
            auto it = row_index.find(mono);
            if (it == row_index.end())
                throw VerificationFailed("build_system: bracket term exceeds the row degree bound");
            sys.rows[component * m + it->second][col] += c;
        }
    };

    for (std::size_t k = 0; k < n; ++k) {
        const Monomial& mo = sys.unknowns[k];
        const Poly2 mono = Poly2::monomial(mo.deg_x, mo.deg_y, 1);
        const Poly2 mono_x = mono.diff(Var::x), mono_y = mono.diff(Var::y);
        // r-slot: B1 gets r px - p r_x - q r_y, B2 gets r qx
        scatter(mono * px - F.p * mono_x - F.q * mono_y, 0, k);
        scatter(mono * qx, 1, k);
        // s-slot: B1 gets s py, B2 gets s qy - p s_x - q s_y
        scatter(mono * py, 0, n + k);
        scatter(mono * qy - F.p * mono_x - F.q * mono_y, 1, n + k);
    }
    return sys;
}

// In-place reduced row echelon form; returns the pivot columns. Pivot rows
// are chosen sparsest-first to damp coefficient growth.
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& rows) {
    std::vector<std::size_t> pivots;
    if (rows.empty()) return pivots;
    const std::size_t ncols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t best = rows.size();
        std::size_t best_nnz = SIZE_MAX;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (sgn(rows[r][col]) == 0) continue;
            std::size_t nnz = 0;
            for (std::size_t c = col; c < ncols; ++c)
                if (sgn(rows[r][c]) != 0) ++nnz;
            if (nnz < best_nnz) {
                best_nnz = nnz;
                best = r;
            }
        }
        if (best == rows.size()) continue;  // free column
        std::swap(rows[rank], rows[best]);
        const Rational inv = 1 / rows[rank][col];
        for (std::size_t c = col; c < ncols; ++c) rows[rank][c] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || sgn(rows[r][col]) == 0) continue;
            const Rational f = rows[r][col];
            for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[rank][c];
        }
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

struct CentralizerBasis {
    int degree_bound = 0;
    std::vector<VectorField> basis;              // canonical reduced-echelon basis
    std::vector<std::size_t> free_columns;       // basis[k] has coefficient 1 at free_columns[k]
    std::vector<Monomial> unknowns;

    std::size_t dimension() const { return basis.size(); }
};

namespace detail {
// Coefficient vector of (r, s) over the unknown layout, or nullopt if a term
// falls outside degree d.
inline std::optional<std::vector<Rational>> vectorize(const VectorField& G,
                                                      const std::vector<Monomial>& unknowns,
                                                      int d) {
    if (!G.is_zero() && G.degree() > d) return std::nullopt;
    std::map<Monomial, std::size_t, GrlexLess> index;
    for (std::size_t k = 0; k < unknowns.size(); ++k) index.emplace(unknowns[k], k);
    std::vector<Rational> v(2 * unknowns.size(), Rational(0));
    for (const auto& [m, c] : G.p.terms()) v[index.at(m)] = c;
    for (const auto& [m, c] : G.q.terms()) v[unknowns.size() + index.at(m)] = c;
    return v;
}

inline VectorField devectorize(const std::vector<Rational>& v,
                               const std::vector<Monomial>& unknowns) {
    VectorField G;
    const std::size_t n = unknowns.size();
    for (std::size_t k = 0; k < n; ++k) {
        G.p += Poly2::monomial(unknowns[k].deg_x, unknowns[k].deg_y, v[k]);
        G.q += Poly2::monomial(unknowns[k].deg_x, unknowns[k].deg_y, v[n + k]);
    }
    return G;
}
}  // namespace detail

// Basis of the degree-d centralizer of F. Throws ZeroField on F = 0 (every
// field would trivially qualify).
inline CentralizerBasis centralizer(const VectorField& F, int d) {
    if (F.is_zero()) throw ZeroField();
    LinearSystem sys = build_system(F, d);
    const std::vector<std::size_t> pivots = rref(sys.rows);

    CentralizerBasis out;
    out.degree_bound = d;
    out.unknowns = sys.unknowns;
    const std::size_t ncols = 2 * sys.unknowns.size();

    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(ncols, Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            if (!sys.rows.empty()) v[pivots[k]] = -sys.rows[k][f];
        VectorField G = detail::devectorize(v, sys.unknowns);
        if (!lie_bracket(F, G).is_zero())
            throw VerificationFailed("centralizer: nullspace vector fails the bracket check");
        out.basis.push_back(std::move(G));
        out.free_columns.push_back(f);
    }
    return out;
}

// Exact span membership. The basis is in canonical reduced form, so the only
// candidate coordinates of G are its entries at the free columns.
inline bool membership(const CentralizerBasis& cb, const VectorField& G) {
    auto v = detail::vectorize(G, cb.unknowns, cb.degree_bound);
    if (!v) return false;
    VectorField combo;
    for (std::size_t k = 0; k < cb.basis.size(); ++k) {
        const Rational c = (*v)[cb.free_columns[k]];
        if (sgn(c) != 0) combo = combo + c * cb.basis[k];
    }
    return combo == G;
}

namespace detail {
// True when det is provably nonvanishing on a punctured neighborhood of the
// origin: either its lowest homogeneous part is c (x^2+y^2)^k, or (fallback)
// it is nonzero at 64 sample points on a small circle.
inline bool nonvanishing_near_origin(const Poly2& det) {
    if (det.is_zero()) return false;
    const unsigned low = det.terms().begin()->first.total();
    Poly2 lowest;
    for (const auto& [m, c] : det.terms())
        if (m.total() == low) lowest += Poly2::monomial(m.deg_x, m.deg_y, c);
    if (low % 2 == 0) {
        const Rational c = lowest.coeff(low, 0);
        if (sgn(c) != 0) {
            const Poly2 circle = Poly2::x().pow(2) + Poly2::y().pow(2);
            if (lowest == c * circle.pow(low / 2)) return true;
        }
    }
    for (int k = 0; k < 64; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / 64.0;
        if (std::abs(det.eval(std::cos(th) / 16.0, std::sin(th) / 16.0)) <= 1e-30) return false;
    }
    return true;
}
}  // namespace detail

// A centralizer element transversal to F (nonzero determinant near the
// origin), by preference provably so; nullopt when every combination tried
// is parallel to F.
inline std::optional<VectorField> find_transversal(const CentralizerBasis& cb,
                                                   const VectorField& F) {
    std::vector<VectorField> candidates = cb.basis;
    for (std::size_t i = 0; i < cb.basis.size(); ++i)
        for (std::size_t j = i + 1; j < cb.basis.size(); ++j) {
            candidates.push_back(cb.basis[i] + cb.basis[j]);
            candidates.push_back(cb.basis[i] - cb.basis[j]);
        }
    for (const VectorField& cand : candidates) {
        const Poly2 det = transversality_det(F, cand);
        if (!det.is_zero() && detail::nonvanishing_near_origin(det)) return cand;
    }
    for (const VectorField& cand : candidates)  // relaxed: any non-parallel element
        if (!transversality_det(F, cand).is_zero()) return cand;
    return std::nullopt;
}

}  // namespace isochron
