#include <catch2/catch_amalgamated.hpp>

#include <holeprobe/complex.hpp>

#include "support.hpp"

using namespace holeprobe;

TEST_CASE("one triangle closes to three vertices and three edges", "[complex]")
{
    auto X = build_complex({{0, 1, 2}});
    CHECK(X.size(0) == 3);
    CHECK(X.size(1) == 3);
    CHECK(X.size(2) == 1);
    CHECK(X.dimension() == 2);
}

TEST_CASE("the six-edge graph has four vertices and no triangles", "[complex]")
{
    auto G = support::graph_g();
    CHECK(G.size(0) == 4);
    CHECK(G.size(1) == 6);
    CHECK(G.size(2) == 0);
}

TEST_CASE("no generators give the empty complex", "[complex]")
{
    auto X = build_complex({});
    CHECK(X.empty());
    CHECK(X.dimension() == -1);
    CHECK(X.size(0) == 0);
    CHECK(X.total_size() == 0);
}

TEST_CASE("empty generator and repeated vertex are invalid", "[complex]")
{
    try
    {
        build_complex({{0, 1}, {}});
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::InvalidSimplex);
    }
    CHECK_THROWS_AS(Simplex({1, 1}), Error);
}

TEST_CASE("levels are lexicographic", "[complex]")
{
    auto X = build_complex({{2, 3}, {0, 3, 1}});
    const auto& edges = X.level(1);
    REQUIRE(edges.size() == 4);
    CHECK(edges[0] == Simplex{0, 1});
    CHECK(edges[1] == Simplex{0, 3});
    CHECK(edges[2] == Simplex{1, 3});
    CHECK(edges[3] == Simplex{2, 3});
    CHECK(X.index_of(Simplex{1, 3}) == std::optional<std::size_t>(2));
}

TEST_CASE("orientation sign", "[complex]")
{
    CHECK(orientation_sign(Simplex{1, 2}, Simplex{0, 1, 2}) == 1);
    CHECK(orientation_sign(Simplex{0, 2}, Simplex{0, 1, 2}) == -1);
    CHECK(orientation_sign(Simplex{0, 1}, Simplex{0, 1, 2}) == 1);
    CHECK(orientation_sign(Simplex{0, 3}, Simplex{0, 1, 2}) == 0);
    CHECK(orientation_sign(Simplex{0}, Simplex{0, 1, 2}) == 0);
}

TEST_CASE("orientation sign is nonzero exactly on codimension-one faces", "[complex][property]")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto X = support::random_complex(rng);
        for (int n = 1; n <= X.dimension(); ++n)
            for (const auto& c : X.level(n))
            {
                int total = 0;
                for (const auto& b : X.level(n - 1))
                {
                    const int s = orientation_sign(b, c);
                    const bool face = std::includes(c.begin(), c.end(), b.begin(), b.end());
                    CHECK((s != 0) == face);
                    total += std::abs(s);
                }
                CHECK(total == n + 1);
            }
    }
}

TEST_CASE("topological boundary", "[complex]")
{
    SECTION("filled triangle: all edges")
    {
        auto X = build_complex({{0, 1, 2}});
        CHECK(topological_boundary(X, 1).size() == 3);
    }
    SECTION("two triangles sharing an edge")
    {
        auto X = build_complex({{0, 1, 2}, {1, 2, 3}});
        auto bd = topological_boundary(X, 1);
        std::vector<Simplex> expected;
        for (const auto& e : X.level(1))
            if (support::brute_cofaces(X, e).size() == 1) expected.push_back(e);
        CHECK(bd == expected);
        CHECK(bd.size() == 4);
        CHECK(std::find(bd.begin(), bd.end(), Simplex{1, 2}) == bd.end());
    }
    SECTION("graph: no cofaces means no boundary")
    {
        CHECK(topological_boundary(support::graph_g(), 1).empty());
    }
}

TEST_CASE("cofaces", "[complex]")
{
    auto T = build_complex({{0, 1, 2}});
    CHECK(cofaces(T, Simplex{0, 1}) == std::vector<Simplex>{Simplex{0, 1, 2}});
    CHECK(cofaces(support::graph_g(), Simplex{1, 3}).empty());

    auto S = build_complex({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    auto cf = cofaces(S, Simplex{0, 1});
    CHECK(cf == support::brute_cofaces(S, Simplex{0, 1}));
    CHECK(cf.size() == 2);

    try
    {
        cofaces(T, Simplex{0, 5});
        FAIL("expected not-found");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::NotFound);
    }
}

TEST_CASE("random complexes are closed and coface queries match brute force", "[complex][property]")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial)
    {
        auto X = support::random_complex(rng);
        for (const auto& s : X.all_simplices())
        {
            if (s.dim() > 0)
                for (std::size_t i = 0; i < s.size(); ++i) CHECK(X.contains(s.face(i)));
            CHECK(X.cofaces(s) == support::brute_cofaces(X, s));
        }
    }
}

TEST_CASE("generator order does not change the level ordering", "[complex][property]")
{
    std::mt19937_64 rng(5);
    std::vector<std::vector<VertexId>> gens{{0, 1, 2}, {2, 3}, {3, 4, 5, 6}, {1, 6}, {7}};
    auto reference = build_complex(gens);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::shuffle(gens.begin(), gens.end(), rng);
        for (auto& g : gens) std::shuffle(g.begin(), g.end(), rng);
        CHECK(build_complex(gens) == reference);
    }
}

TEST_CASE("union and intersection", "[complex]")
{
    auto A = build_complex({{0, 1, 2}});
    auto B = build_complex({{1, 2, 3}});
    auto I = intersection(A, B);
    CHECK(I.size(0) == 2);
    CHECK(I.size(1) == 1);
    CHECK(I.size(2) == 0);
    auto U = complex_union(A, B);
    CHECK(U == build_complex({{0, 1, 2}, {1, 2, 3}}));
    CHECK(complex_union(A, A) == A);
}
