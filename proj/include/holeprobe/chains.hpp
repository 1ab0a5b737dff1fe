/**
 * Unweighted chain complex of a simplicial complex: boundary matrices,
 * combinatorial (Hodge) Laplacians and homology dimensions.
 *
 * Homology is computed with exact integer elimination, so it can serve as an
 * oracle that is independent of any eigensolver.
 */
#ifndef HOLEPROBE_CHAINS_HPP
#define HOLEPROBE_CHAINS_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/multiprecision/cpp_int.hpp>

#include "complex.hpp"

namespace holeprobe {

using SparseMatrix = Eigen::SparseMatrix<double>;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * A real n-chain: coefficients indexed by the ordering of X_n.
 */
struct Chain
{
    int dim = 0;
    Vector coefficients;
};

/**
 * Signed incidence matrix B_n of shape |X_{n-1}| x |X_n|. B_0 has no rows.
 */
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> boundary_matrix(const SimplicialComplex& X, int n)
{
    const auto rows = static_cast<Eigen::Index>(X.size(n - 1));
    const auto cols = static_cast<Eigen::Index>(X.size(n));
    Eigen::SparseMatrix<Scalar> B(rows, cols);
    if (n <= 0 || cols == 0)
        return B;

    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(static_cast<std::size_t>(cols) * (n + 1));
    const auto& simplices = X.level(n);
    for (std::size_t k = 0; k < simplices.size(); ++k)
    {
        const Simplex& c = simplices[k];
        for (std::size_t i = 0; i < c.size(); ++i)
        {
            auto row = X.require_index(c.face(i));
            triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k),
                                  static_cast<Scalar>(i % 2 == 0 ? 1 : -1));
        }
    }
    B.setFromTriplets(triplets.begin(), triplets.end());
    return B;
}

/** B_n^T B_n. */
inline SparseMatrix down_laplacian(const SimplicialComplex& X, int n)
{
    SparseMatrix B = boundary_matrix(X, n);
    SparseMatrix L = SparseMatrix(B.transpose()) * B;
    return L;
}

/** B_{n+1} B_{n+1}^T; the zero matrix when X_{n+1} is empty. */
inline SparseMatrix up_laplacian(const SimplicialComplex& X, int n)
{
    SparseMatrix B = boundary_matrix(X, n + 1);
    SparseMatrix L = B * SparseMatrix(B.transpose());
    return L;
}

inline SparseMatrix laplacian(const SimplicialComplex& X, int n)
{
    SparseMatrix L = down_laplacian(X, n) + up_laplacian(X, n);
    return L;
}

namespace detail {

/**
 * Fraction-free elimination on sparse integer rows. Rows are kept primitive
 * (divided by their content) so entries stay small for boundary matrices.
 * Returns false if an intermediate product would overflow `Int`.
 */
template <typename Int>
bool eliminate_rank(std::vector<std::vector<std::pair<int, Int>>> rows, std::size_t& rank_out)
{
    using Row = std::vector<std::pair<int, Int>>;
    auto abs_value = [](const Int& a) { return a < 0 ? Int(-a) : a; };
    auto gcd = [&](Int a, Int b) {
        a = abs_value(a);
        b = abs_value(b);
        while (b != 0) { Int t = a % b; a = b; b = t; }
        return a;
    };
    auto mul = [](const Int& a, const Int& b, Int& out) -> bool {
        if constexpr (std::is_integral_v<Int>)
            return !__builtin_mul_overflow(a, b, &out);
        else
        {
            out = a * b;
            return true;
        }
    };
    auto sub = [](const Int& a, const Int& b, Int& out) -> bool {
        if constexpr (std::is_integral_v<Int>)
            return !__builtin_sub_overflow(a, b, &out);
        else
        {
            out = a - b;
            return true;
        }
    };

    std::size_t rank = 0;
    // Pivot column by column: pick the row with the smallest |leading entry|
    // among rows whose leading column is the current minimum.
    while (true)
    {
        rows.erase(std::remove_if(rows.begin(), rows.end(), [](const Row& r) { return r.empty(); }),
                   rows.end());
        if (rows.empty()) break;

        int lead = rows.front().front().first;
        for (const auto& r : rows) lead = std::min(lead, r.front().first);

        std::size_t pivot = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (rows[i].front().first != lead) continue;
            if (pivot == rows.size() ||
                abs_value(rows[i].front().second) < abs_value(rows[pivot].front().second))
                pivot = i;
        }
        Row prow = std::move(rows[pivot]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pivot));
        ++rank;
        const Int p = prow.front().second;

        for (auto& r : rows)
        {
            if (r.front().first != lead) continue;
            const Int a = r.front().second;
            Int g = gcd(p, a);
            Int fr = p / g;    // multiplier for r
            Int fp = a / g;    // multiplier for pivot row
            Row out;
            out.reserve(r.size() + prow.size());
            std::size_t i = 0, j = 0;
            while (i < r.size() || j < prow.size())
            {
                int col;
                Int x = 0, y = 0;
                if (j >= prow.size() || (i < r.size() && r[i].first < prow[j].first))
                {
                    col = r[i].first;
                    if (!mul(r[i].second, fr, x)) return false;
                    ++i;
                }
                else if (i >= r.size() || prow[j].first < r[i].first)
                {
                    col = prow[j].first;
                    if (!mul(prow[j].second, fp, y)) return false;
                    x = 0;
                    ++j;
                }
                else
                {
                    col = r[i].first;
                    if (!mul(r[i].second, fr, x) || !mul(prow[j].second, fp, y)) return false;
                    ++i;
                    ++j;
                }
                Int v;
                if (!sub(x, y, v)) return false;
                if (v != 0) out.emplace_back(col, v);
            }
            Int content = 0;
            for (const auto& e : out) content = gcd(content, e.second);
            if (content > 1)
                for (auto& e : out) e.second /= content;
            r = std::move(out);
        }
    }
    rank_out = rank;
    return true;
}

}   // namespace detail

/**
 * Exact rank of an integer matrix. Falls back to arbitrary precision when
 * 64-bit arithmetic would overflow.
 */
inline std::size_t exact_rank(const Eigen::SparseMatrix<int>& M)
{
    Eigen::SparseMatrix<int, Eigen::RowMajor> R = M;
    std::vector<std::vector<std::pair<int, std::int64_t>>> rows(static_cast<std::size_t>(R.rows()));
    for (Eigen::Index i = 0; i < R.outerSize(); ++i)
        for (Eigen::SparseMatrix<int, Eigen::RowMajor>::InnerIterator it(R, i); it; ++it)
            if (it.value() != 0)
                rows[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(it.col()), it.value());

    std::size_t rank = 0;
    if (detail::eliminate_rank<std::int64_t>(rows, rank))
        return rank;

    using boost::multiprecision::cpp_int;
    std::vector<std::vector<std::pair<int, cpp_int>>> big(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [c, v] : rows[i]) big[i].emplace_back(c, cpp_int(v));
    detail::eliminate_rank<cpp_int>(std::move(big), rank);
    return rank;
}

/**
 * dim ker B_n - rank B_{n+1}, with both ranks computed exactly.
 */
inline std::size_t homology_dimension(const SimplicialComplex& X, int n)
{
    if (n < 0) return 0;
    const std::size_t cells = X.size(n);
    const std::size_t rank_n = exact_rank(boundary_matrix<int>(X, n));
    const std::size_t rank_up = exact_rank(boundary_matrix<int>(X, n + 1));
    return cells - rank_n - rank_up;
}

/** Betti numbers b_0 .. b_dim. */
inline std::vector<std::size_t> betti_numbers(const SimplicialComplex& X)
{
    std::vector<std::size_t> out;
    for (int n = 0; n <= X.dimension(); ++n)
        out.push_back(homology_dimension(X, n));
    return out;
}

/**
 * Coefficients of a chain on `from` restricted to the n-simplices shared
 * with `to` (the projection onto a subcomplex).
 */
inline Vector restrict_chain(const SimplicialComplex& from, const SimplicialComplex& to, int n,
                             const Vector& v)
{
    Vector out = Vector::Zero(static_cast<Eigen::Index>(to.size(n)));
    const auto& simplices = to.level(n);
    for (std::size_t i = 0; i < simplices.size(); ++i)
        if (auto j = from.index_of(simplices[i]))
            out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(*j));
    return out;
}

/** Zero-filling inclusion of a chain on a subcomplex into a larger complex. */
inline Vector embed_chain(const SimplicialComplex& from, const SimplicialComplex& to, int n,
                          const Vector& v)
{
    Vector out = Vector::Zero(static_cast<Eigen::Index>(to.size(n)));
    const auto& simplices = from.level(n);
    for (std::size_t i = 0; i < simplices.size(); ++i)
        out(static_cast<Eigen::Index>(to.require_index(simplices[i]))) = v(static_cast<Eigen::Index>(i));
    return out;
}

}   // namespace holeprobe

#endif
