#include <catch2/catch_amalgamated.hpp>

#include <holeprobe/harness.hpp>
#include <holeprobe/weighted.hpp>

#include "support.hpp"

using namespace holeprobe;

namespace {

WeightedComplex single_edge(double m)
{
    auto X = build_complex({{0, 1}});
    return WeightedComplex(X, WeightFunction({Vector::Ones(2), Vector::Constant(1, m)}));
}

double dense_diff(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    if (a.size() == 0) return 0.0;
    return (Eigen::MatrixXd(a) - Eigen::MatrixXd(b)).cwiseAbs().maxCoeff();
}

}   // namespace

TEST_CASE("weights are validated", "[weighted]")
{
    auto X = build_complex({{0, 1}});
    auto kind_of = [&](WeightFunction w) {
        try
        {
            WeightedComplex W(X, std::move(w));
        }
        catch (const Error& e)
        {
            return e.kind();
        }
        return ErrorKind::Parse;
    };
    CHECK(kind_of(WeightFunction({Vector::Ones(2), Vector::Constant(1, 0.0)})) == ErrorKind::InvalidWeight);
    CHECK(kind_of(WeightFunction({Vector::Ones(2), Vector::Constant(1, -1.0)})) == ErrorKind::InvalidWeight);
    CHECK(kind_of(WeightFunction({Vector::Ones(3), Vector::Ones(1)})) == ErrorKind::InvalidWeight);
    CHECK(kind_of(WeightFunction({Vector::Ones(2)})) == ErrorKind::InvalidWeight);
}

TEST_CASE("filtration condition", "[weighted]")
{
    auto T = build_complex({{0, 1, 2}});
    CHECK(check_filtration(WeightedComplex::unit(T)));

    auto E = build_complex({{0, 1, 2}});
    auto w = WeightFunction::unit(E);
    w.level(2)(0) = 2.0;
    CHECK_FALSE(check_filtration(WeightedComplex(E, w)));
}

TEST_CASE("weighted boundary", "[weighted]")
{
    SECTION("unit weights give the plain boundary")
    {
        for (const auto& X : support::corpus(40))
        {
            auto W = WeightedComplex::unit(X);
            for (int n = 0; n <= X.dimension() + 1; ++n)
                CHECK(dense_diff(weighted_boundary(W, n), boundary_matrix(X, n)) == 0.0);
        }
    }
    SECTION("single edge scales by its weight")
    {
        auto W = single_edge(5.0);
        CHECK(dense_diff(weighted_boundary(W, 1), 5.0 * boundary_matrix(W.complex(), 1)) == 0.0);
    }
}

TEST_CASE("single edge Laplacian grows like m squared", "[weighted]")
{
    for (double m : {1.0, 3.0, 10.0, 100.0})
    {
        auto W = single_edge(m);
        Eigen::Matrix2d expected;
        expected << 1, -1, -1, 1;
        expected *= m * m;
        CHECK((Eigen::MatrixXd(weighted_laplacian(W, 0)) - expected).norm() <= 1e-12 * m * m);
        CHECK(operator_norm(W, 0) == Catch::Approx(2.0 * m * m).epsilon(1e-12));
    }
    auto r = norm_report(single_edge(1.0), 0);
    CHECK(r.norm == Catch::Approx(2.0));
    CHECK(r.bound == 4.0);
    CHECK(r.holds);
}

TEST_CASE("vertices only: zero Laplacian", "[weighted]")
{
    auto W = WeightedComplex::unit(build_complex({{0}, {1}, {2}}));
    CHECK(operator_norm(W, 0) == 0.0);
}

TEST_CASE("weighted invariants on random weights", "[weighted][property]")
{
    std::mt19937_64 rng(23);
    for (const auto& X : support::corpus(120, 29))
    {
        auto W = support::random_weights(X, rng);
        for (int n = 0; n <= X.dimension(); ++n)
        {
            // boundary of a boundary vanishes after conjugation
            if (n >= 2)
            {
                Eigen::MatrixXd P = Eigen::MatrixXd(weighted_boundary(W, n - 1)) *
                                    Eigen::MatrixXd(weighted_boundary(W, n));
                CHECK(P.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, Eigen::MatrixXd(weighted_boundary(W, n)).norm() *
                                                                        Eigen::MatrixXd(weighted_boundary(W, n - 1)).norm()));
            }
            // commuting square B_n W_n = W_{n-1} B~_n
            if (n >= 1)
            {
                Eigen::MatrixXd lhs = Eigen::MatrixXd(boundary_matrix(X, n)) * W.weights().level(n).asDiagonal();
                Eigen::MatrixXd rhs = W.weights().level(n - 1).asDiagonal() * Eigen::MatrixXd(weighted_boundary(W, n));
                CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
            }
            // two assembly routes agree
            const SparseMatrix L = weighted_laplacian(W, n);
            const double scale = std::max(1.0, Eigen::MatrixXd(L).cwiseAbs().maxCoeff());
            CHECK(dense_diff(L, sandwich_laplacian(W, n)) <= 1e-12 * scale);
            CHECK(dense_diff(weighted_up_laplacian(W, n), sandwich_up_laplacian(W, n)) <= 1e-12 * scale);
            CHECK(dense_diff(weighted_down_laplacian(W, n), sandwich_down_laplacian(W, n)) <= 1e-12 * scale);
            // the kernel dimension is combinatorial
            CHECK(laplacian_nullity(W, n) == homology_dimension(X, n));
        }
    }
}

TEST_CASE("weighted Laplacian split keeps its fundamental properties", "[weighted][property]")
{
    std::mt19937_64 rng(31);
    for (const auto& X : support::corpus(50, 37))
    {
        auto W = support::random_filtration_weights(X, rng);
        for (int n = 0; n <= X.dimension(); ++n)
        {
            Eigen::MatrixXd down(weighted_down_laplacian(W, n));
            Eigen::MatrixXd up(weighted_up_laplacian(W, n));
            CHECK((down * up).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((up * down).cwiseAbs().maxCoeff() <= 1e-10);
            Eigen::MatrixXd stacked(2 * down.rows(), down.cols());
            stacked << down, up;
            CHECK(nullity(weighted_laplacian(W, n)) == X.size(n) - support::svd_rank(stacked));
        }
    }
}

TEST_CASE("up-Laplacian entries from the coface sum", "[weighted]")
{
    SECTION("simplex without cofaces")
    {
        auto W = WeightedComplex::unit(build_complex({{0, 1, 2}, {2, 3}}));
        const std::size_t e = W.complex().require_index(Simplex{2, 3});
        for (std::size_t j = 0; j < W.complex().size(1); ++j) CHECK(up_laplacian_entry(W, 1, e, j) == 0.0);
    }
    SECTION("lone triangle edge, unit weights")
    {
        auto W = WeightedComplex::unit(build_complex({{0, 1, 2}}));
        CHECK(up_laplacian_entry(W, 1, 0, 0) == 1.0);
    }
    SECTION("random weighted complexes agree with the matrix product")
    {
        std::mt19937_64 rng(41);
        for (const auto& X : support::corpus(60, 43))
        {
            auto W = support::random_weights(X, rng);
            for (int n = 0; n < X.dimension(); ++n)
            {
                Eigen::MatrixXd L(weighted_up_laplacian(W, n));
                for (std::size_t i = 0; i < X.size(n); ++i)
                    for (std::size_t j = 0; j < X.size(n); ++j)
                    {
                        const double ref = L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                        CHECK(std::abs(up_laplacian_entry(W, n, i, j) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
                    }
            }
        }
    }
    SECTION("index out of range")
    {
        auto W = WeightedComplex::unit(build_complex({{0, 1, 2}}));
        try
        {
            up_laplacian_entry(W, 1, 0, 3);
            FAIL("expected an error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::IndexOutOfRange);
        }
    }
}

TEST_CASE("norm bound under the filtration condition", "[weighted][property]")
{
    std::mt19937_64 rng(47);
    for (const auto& X : support::corpus())
        for (int trial = 0; trial < 5; ++trial)
        {
            auto W = support::random_filtration_weights(X, rng);
            REQUIRE(check_filtration(W));
            for (int n = 0; n <= X.dimension(); ++n) CHECK(norm_report(W, n).holds);
        }
}

TEST_CASE("union and intersection of weighted complexes", "[weighted]")
{
    std::mt19937_64 rng(53);
    SECTION("idempotent")
    {
        auto W = support::random_weights(build_complex({{0, 1, 2}, {2, 3}}), rng);
        auto U = weighted_union(W, W);
        CHECK(U.complex() == W.complex());
        for (int n = 0; n <= 2; ++n) CHECK(U.weights().level(n) == W.weights().level(n));
    }
    SECTION("disjoint pieces")
    {
        auto A = WeightedComplex::unit(build_complex({{0, 1, 2}}));
        auto B = WeightedComplex::unit(build_complex({{3, 4}}));
        CHECK(weighted_intersection(A, B).complex().empty());
        auto U = weighted_union(A, B);
        Eigen::MatrixXd L(weighted_laplacian(U, 1));
        // edges {0,1},{0,2},{1,2} then {3,4}: no coupling across pieces
        CHECK(L.block(0, 3, 3, 1).norm() == 0.0);
        CHECK(L(3, 3) == 2.0);
    }
    SECTION("annulus and disc: one hole fewer")
    {
        auto inst = annulus_disc_instance(6, 1e-2);
        auto U = weighted_union(inst.outer, inst.filler);
        CHECK(homology_dimension(inst.outer.complex(), 1) == 1);
        CHECK(homology_dimension(U.complex(), 1) == 0);
        auto I = weighted_intersection(inst.outer, inst.filler);
        CHECK(I.complex().size(1) == 6);
        CHECK(I.complex().size(2) == 0);
    }
    SECTION("mismatched overlap")
    {
        auto A = WeightedComplex::unit(build_complex({{0, 1}}));
        auto X = build_complex({{0, 1}});
        WeightedComplex B(X, WeightFunction({Vector::Ones(2), Vector::Constant(1, 1.0 + 1e-15)}));
        try
        {
            weighted_union(A, B);
            FAIL("expected an error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::IncompatibleWeights);
        }
    }
}

TEST_CASE("up-Laplacian of a union splits over the pieces", "[weighted][property]")
{
    std::mt19937_64 rng(59);
    std::normal_distribution<double> gauss;
    for (std::size_t m : {4, 6, 10})
    {
        auto inst = annulus_disc_instance(m, 1e-2);
        auto U = weighted_union(inst.outer, inst.filler);
        const auto& XU = U.complex();
        const SparseMatrix LU = weighted_up_laplacian(U, 1);
        const SparseMatrix LX = weighted_up_laplacian(inst.outer, 1);
        const SparseMatrix LY = weighted_up_laplacian(inst.filler, 1);
        for (int trial = 0; trial < 20; ++trial)
        {
            Vector v(static_cast<Eigen::Index>(XU.size(1)));
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
            const Vector px = restrict_chain(XU, inst.outer.complex(), 1, v);
            const Vector py = restrict_chain(XU, inst.filler.complex(), 1, v);
            const Vector ax = embed_chain(inst.outer.complex(), XU, 1, LX * px);
            const Vector ay = embed_chain(inst.filler.complex(), XU, 1, LY * py);
            const Vector lhs = LU * v;
            CHECK((lhs - ax - ay).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
            CHECK(lhs.norm() <= (LX * px).norm() + (LY * py).norm() + 1e-12);
        }
    }
}

TEST_CASE("up-Laplacian on boundary chains", "[weighted][property]")
{
    SECTION("n+2 bounds single-coface complexes")
    {
        std::mt19937_64 rng(61);
        std::normal_distribution<double> gauss;
        const std::vector<SimplicialComplex> shapes{
            build_complex({{0, 1}}), build_complex({{0, 1, 2}}), build_complex({{0, 1, 2}, {3, 4, 5}}),
            build_complex({{0, 1, 2, 3}}), build_complex({{0, 1, 2}, {2, 3, 4}})};
        for (const auto& X : shapes)
            for (int n = 0; n < X.dimension(); ++n)
            {
                const auto bd = topological_boundary(X, n);
                const SparseMatrix L = up_laplacian(X, n);
                for (int trial = 0; trial < 100; ++trial)
                {
                    Vector v = Vector::Zero(static_cast<Eigen::Index>(X.size(n)));
                    for (const auto& s : bd) v(static_cast<Eigen::Index>(X.require_index(s))) = gauss(rng);
                    CHECK((L * v).norm() <= (n + 2) * v.norm() + 1e-10);
                }
            }
    }
    SECTION("n+1 is exceeded by the boundary of a triangle")
    {
        auto X = build_complex({{0, 1, 2}});
        Vector v = Eigen::MatrixXd(boundary_matrix(X, 2)).col(0);
        const double ratio = (up_laplacian(X, 1) * v).norm() / v.norm();
        CHECK(ratio == Catch::Approx(3.0));
        CHECK(ratio > 2.0);
    }
}
