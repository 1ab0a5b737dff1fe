// Shared fixtures and independent oracles for the test suites.
#ifndef HOLEPROBE_TESTS_SUPPORT_HPP
#define HOLEPROBE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <holeprobe/chains.hpp>
#include <holeprobe/complex.hpp>
#include <holeprobe/weighted.hpp>

namespace support {

using namespace holeprobe;

/** Random generators over at most `max_vertices` vertices, facets of dimension <= max_dim. */
inline SimplicialComplex random_complex(std::mt19937_64& rng, int max_vertices = 8, int max_dim = 3)
{
    std::uniform_int_distribution<int> nv(1, max_vertices);
    const int vertices = nv(rng);
    std::uniform_int_distribution<int> ngen(1, 7);
    std::uniform_int_distribution<int> dim(0, std::min(max_dim, vertices - 1));
    std::vector<std::vector<VertexId>> gens;
    const int count = ngen(rng);
    std::vector<VertexId> pool(static_cast<std::size_t>(vertices));
    for (int i = 0; i < vertices; ++i) pool[static_cast<std::size_t>(i)] = static_cast<VertexId>(i);
    for (int g = 0; g < count; ++g)
    {
        std::shuffle(pool.begin(), pool.end(), rng);
        gens.emplace_back(pool.begin(), pool.begin() + dim(rng) + 1);
    }
    return build_complex(gens);
}

/** A fixed corpus of random complexes; deterministic across runs. */
inline std::vector<SimplicialComplex> corpus(std::size_t count = 200, std::uint64_t seed = 7)
{
    std::mt19937_64 rng(seed);
    std::vector<SimplicialComplex> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_complex(rng));
    return out;
}

/** Weights drawn top-down so that each simplex is no heavier than any of its faces. */
inline WeightedComplex random_filtration_weights(const SimplicialComplex& X, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> base(0.5, 2.0);
    std::uniform_real_distribution<double> shrink(0.05, 1.0);
    std::vector<Vector> levels;
    for (int n = 0; n <= X.dimension(); ++n)
    {
        Vector w(static_cast<Eigen::Index>(X.size(n)));
        for (std::size_t i = 0; i < X.size(n); ++i)
        {
            if (n == 0)
            {
                w(static_cast<Eigen::Index>(i)) = base(rng);
                continue;
            }
            const Simplex& c = X.simplex(n, i);
            double cap = std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < c.size(); ++f)
                cap = std::min(cap, levels[static_cast<std::size_t>(n - 1)](
                                        static_cast<Eigen::Index>(X.require_index(c.face(f)))));
            w(static_cast<Eigen::Index>(i)) = cap * shrink(rng);
        }
        levels.push_back(std::move(w));
    }
    return WeightedComplex(X, WeightFunction(std::move(levels)));
}

/** Arbitrary positive weights, no filtration condition. */
inline WeightedComplex random_weights(const SimplicialComplex& X, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> logw(-2.0, 2.0);
    std::vector<Vector> levels;
    for (int n = 0; n <= X.dimension(); ++n)
    {
        Vector w(static_cast<Eigen::Index>(X.size(n)));
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(logw(rng));
        levels.push_back(std::move(w));
    }
    return WeightedComplex(X, WeightFunction(std::move(levels)));
}

/** Numerical rank from an SVD, singular values above 1e-9 max(1, sigma_max). */
inline std::size_t svd_rank(const Eigen::MatrixXd& M)
{
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    const double thr = 1e-9 * std::max(1.0, s(0));
    return static_cast<std::size_t>((s.array() > thr).count());
}

/** dim ker B_n - rank B_{n+1}, both by SVD. */
inline std::size_t rank_nullity_homology(const SimplicialComplex& X, int n)
{
    const Eigen::MatrixXd Bn = Eigen::MatrixXd(boundary_matrix(X, n));
    const Eigen::MatrixXd Bup = Eigen::MatrixXd(boundary_matrix(X, n + 1));
    return X.size(n) - svd_rank(Bn) - svd_rank(Bup);
}

/** Brute-force coface enumeration, independent of the complex's own index. */
inline std::vector<Simplex> brute_cofaces(const SimplicialComplex& X, const Simplex& c)
{
    std::vector<Simplex> out;
    for (const auto& f : X.level(c.dim() + 1))
        if (std::includes(f.begin(), f.end(), c.begin(), c.end())) out.push_back(f);
    return out;
}

/** The example graph: all six edges on four vertices. */
inline SimplicialComplex graph_g()
{
    return build_complex({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

/** The example graph with the triangle {1,2,3} filled. */
inline SimplicialComplex complex_h()
{
    return build_complex({{0, 1}, {0, 2}, {0, 3}, {1, 2, 3}});
}

}   // namespace support

#endif
