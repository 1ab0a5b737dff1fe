#include <catch2/catch_amalgamated.hpp>

#include <holeprobe/harness.hpp>

#include "support.hpp"

using namespace holeprobe;

TEST_CASE("annulus with a filled hole", "[harness]")
{
    auto inst = annulus_disc_instance(6, 1e-2);
    CHECK(check_conditions(inst).all());
    CHECK(homology_dimension(inst.outer.complex(), 1) == 1);
    CHECK(homology_dimension(weighted_union(inst.outer, inst.filler).complex(), 1) == 0);
    CHECK(inst.layout.size() == 13);

    auto r = verify_eigenvalue_bound(inst);
    CHECK(r.bound == Catch::Approx(0.02));
    CHECK(r.holds);
    CHECK(r.lambda <= 0.02);
    // frozen from the dense eigensolver
    CHECK(r.lambda == Catch::Approx(4.000000178843961e-09).epsilon(1e-6));
}

TEST_CASE("unit filler is the boundary case", "[harness]")
{
    auto inst = annulus_disc_instance(6, 1.0);
    auto c = check_conditions(inst);
    CHECK(c.all());
    CHECK(verify_eigenvalue_bound(inst).holds);
}

TEST_CASE("bad instance parameters", "[harness]")
{
    for (auto [m, eps] : {std::pair<std::size_t, double>{2, 0.1}, {6, 0.0}, {6, -1.0}})
    {
        try
        {
            annulus_disc_instance(m, eps);
            FAIL("expected an error");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::Parameter);
        }
    }
}

TEST_CASE("condition checks catch broken instances", "[harness]")
{
    auto inst = annulus_disc_instance(6, 0.5);
    SECTION("weight ratio")
    {
        inst.epsilon = 0.1;
        auto c = check_conditions(inst);
        CHECK_FALSE(c.weight_ratio);
        CHECK(c.filtration);
        CHECK(c.failures() == " weight-ratio");
    }
    SECTION("filler not glued along its boundary")
    {
        auto shifted = build_complex({{20, 0, 1}, {20, 1, 2}});
        inst.filler = WeightedComplex::unit(shifted);
        auto c = check_conditions(inst);
        CHECK_FALSE(c.glued_along_boundary);
        CHECK_FALSE(c.homology_drops);
    }
    SECTION("filler heavier than its faces")
    {
        inst.filler = detail::weighted_fan(inst.filler.complex(), 12, 2.0);
        inst.epsilon = 4.0;
        CHECK_FALSE(check_conditions(inst).filtration);
    }
}

TEST_CASE("bound holds over the grid and shrinks with epsilon", "[harness]")
{
    for (std::size_t m : {4, 6, 10})
    {
        double previous = std::numeric_limits<double>::infinity();
        for (double eps : {1e-1, 1e-2, 1e-3})
        {
            auto r = verify_eigenvalue_bound(annulus_disc_instance(m, eps));
            CHECK(r.holds);
            CHECK(r.lambda <= 2.0 * eps + 1e-10);
            CHECK(r.lambda < previous);
            previous = r.lambda;
        }
    }
}

TEST_CASE("several filled holes", "[harness]")
{
    SECTION("distinct epsilons")
    {
        auto inst = multi_disc_instance(3, {1e-1, 1e-2, 1e-3});
        CHECK(homology_dimension(inst.outer.complex(), 1) == 3);
        CHECK(homology_dimension(inst.combined.complex(), 1) == 0);
        auto r = verify_multi_bound(inst);
        REQUIRE(r.eigenvalues.size() == 3);
        CHECK(r.all());
        CHECK(r.eigenvalues[0] <= 2e-3 + 1e-10);
        CHECK(r.eigenvalues[1] <= 2e-2 + 1e-10);
        CHECK(r.eigenvalues[2] <= 2e-1 + 1e-10);
        CHECK(r.max_overlap <= 1e-8);
    }
    SECTION("one disc is the single instance")
    {
        auto r = verify_multi_bound(multi_disc_instance(1, {1e-2}));
        auto s = verify_eigenvalue_bound(annulus_disc_instance(6, 1e-2));
        CHECK(r.eigenvalues.front() == Catch::Approx(s.lambda).epsilon(1e-6));
    }
    SECTION("equal epsilons")
    {
        auto r = verify_multi_bound(multi_disc_instance(3, {1e-2, 1e-2, 1e-2}));
        for (double l : r.eigenvalues) CHECK(l <= 2e-2 + 1e-10);
    }
    SECTION("mismatched epsilon list")
    {
        CHECK_THROWS_AS(multi_disc_instance(3, {1e-2}), Error);
        CHECK_THROWS_AS(multi_disc_instance(0, {}), Error);
    }
}

TEST_CASE("three rings", "[harness]")
{
    auto a = three_rings_configuration(120, 2024);
    auto b = three_rings_configuration(120, 2024);
    CHECK(a == b);
    CHECK(a.size() == 120);
    CHECK_THROWS_AS(three_rings_configuration(29, 1), Error);

    auto r = analyze_three_rings(120, 2024);
    CHECK(r.full_nullity == 0);
    REQUIRE(r.low.size() == 3);
    std::vector<std::size_t> rings = r.ring;
    std::sort(rings.begin(), rings.end());
    CHECK(rings == std::vector<std::size_t>{0, 1, 2});
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(r.low[i].value <= r.next / 5.0);
        CHECK(r.mass[i] >= 0.7);
    }
}

TEST_CASE("random clouds are reproducible", "[harness]")
{
    CHECK(random_cloud(10, 3) == random_cloud(10, 3));
    CHECK_FALSE(random_cloud(10, 3) == random_cloud(10, 4));
}
