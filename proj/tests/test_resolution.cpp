#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "golden_check.hpp"
#include "hcm/chart_io.hpp"
#include "hcm/extpower.hpp"
#include "hcm/resolution.hpp"
#include "oracle/milnor_resolution.hpp"

using namespace hcm;

namespace {

const ExtChart& sphere_chart()
{
    static const ExtChart c = ext_chart(minimal_resolution(sphere_module(20), 6, 26));
    return c;
}

bool edge_between(const ExtChart& c, int k, const std::string& a, const std::string& b)
{
    auto i = c.find(a), j = c.find(b);
    for (const auto& e : c.edges)
        if (e.k == k && e.from == i && e.to == j)
            return true;
    return false;
}

}  // namespace

TEST_CASE("sphere: stage one generators are the h_i")
{
    auto r = minimal_resolution(sphere_module(8), 3, 8);
    std::vector<int> degs;
    for (const auto& g : r.gens(1))
        degs.push_back(g.degree);
    CHECK(degs == std::vector<int>{1, 2, 4, 8});
    auto c = ext_chart(r);
    CHECK(c.dim(0, 0) == 1);
    CHECK(c.dim(1, 1) == 1);
    CHECK(c.dim(1, 3) == 0);
    CHECK(c.dim(2, 2) == 1);
    CHECK(c.dim(3, 3) == 1);
}

TEST_CASE("sphere Ext agrees with the Milnor-basis oracle for t <= 20, s <= 6")
{
    oracle::SphereResolution o(6, 20);
    auto r = minimal_resolution(sphere_module(20), 6, 20);
    for (int s = 0; s <= 6; ++s)
        for (int t = 0; t <= 20; ++t) {
            int mine = 0;
            for (const auto& g : r.gens(s))
                mine += g.degree == t;
            if (s == 0)
                mine = t == 0;
            CHECK_MESSAGE(mine == o.ext_dim(s, t), "s=" << s << " t=" << t);
        }
}

TEST_CASE("sphere spot checks in stems 14 and 17")
{
    const auto& c = sphere_chart();
    // d0 is indecomposable at (14, 4).
    auto d0 = c.at_stem(4, 14);
    REQUIRE(d0.size() == 1);
    CHECK(c.classes[d0[0]].label.rfind("x_{4,", 0) == 0);
    // h1^2 h4 at (17, 3), with h4 the stage-one generator in degree 16.
    auto h4 = c.at(1, 16);
    REQUIRE(h4.size() == 1);
    CHECK(c.classes[h4[0]].label == "x_{1,16}");
    bool found = false;
    for (auto i : c.at_stem(3, 17))
        found |= c.classes[i].label == "h1^2 x_{1,16}";
    CHECK(found);
    CHECK(c.dim(3, 17 + 3) == 1);
}

TEST_CASE("resolutions verify, are minimal and deterministic")
{
    std::vector<GradedModule> ms{sphere_module(12), o_module(17), o_module(12), d2_splitting_summands(16, 0).d2_part,
                                 d2_splitting_summands(17, 1).d2_part, d2_splitting_summands(12, 4).d2_part};
    auto o = o_module(17);
    ms.push_back(tensor(o, o, 32, 34));
    for (const auto& m : ms) {
        auto r = minimal_resolution(m, 5, m.hi() + 5);
        CHECK(verify_resolution(r).empty());
        for (int t = m.lo(); t <= m.hi(); ++t) {
            int g0 = 0;
            for (const auto& g : r.gens(0))
                g0 += g.degree == t;
            // Ext^0 counts module generators: classes not hit by positive operations.
            Subspace im(m.dim(t));
            for (int a = 1; t - a >= m.lo(); ++a) {
                const auto& A = m.act(a, t - a);
                for (std::size_t j = 0; j < A.cols(); ++j)
                    im.insert(A.col(j));
            }
            CHECK(std::size_t(g0) == m.dim(t) - im.dim());
        }
        auto c1 = ext_chart(r);
        auto c2 = ext_chart(minimal_resolution(m, 5, m.hi() + 5));
        REQUIRE(c1.classes.size() == c2.classes.size());
        for (std::size_t i = 0; i < c1.classes.size(); ++i) {
            CHECK(c1.classes[i].label == c2.classes[i].label);
            CHECK(c1.classes[i].t == c2.classes[i].t);
        }
        CHECK(c1.edges == c2.edges);
    }
}

TEST_CASE("HZ has Ext equal to F2[h0]")
{
    auto z = builtin_module("Z", std::nullopt, 20);
    auto c = ext_chart(minimal_resolution(z, 6, 20));
    for (const auto& k : c.classes)
        CHECK_MESSAGE(k.stem() == 0, k.label);
    for (int s = 0; s <= 6; ++s)
        CHECK(c.dim(s, s) == 1);
    CHECK(homotopy_from_chart(c, 0) == AbelianGroup::z());
}

TEST_CASE("builtin names")
{
    CHECK(builtin_module("o:1", 17, 0).total_dim() == 3);
    CHECK_THROWS_AS(builtin_module("o:0", 17, 0), InputError);
    CHECK_THROWS_AS(builtin_module("o", std::nullopt, 0), InputError);
    CHECK_THROWS_AS(builtin_module("nope", 3, 0), InputError);
}

TEST_CASE("zero module has an empty resolution")
{
    GradedModule z(0, 4);
    auto c = ext_chart(minimal_resolution(z, 3, 4));
    CHECK(c.classes.empty());
}

TEST_CASE("window too small is a range error")
{
    auto o = o_module(16);
    CHECK_THROWS_AS(minimal_resolution(o, 3, o.hi() + 10), RangeError);
}

TEST_CASE("golden charts")
{
    auto fx = golden::fixtures();
    CHECK(fx.size() == 8);
    for (const auto& p : fx) {
        auto r = golden::check(p);
        std::string msg;
        for (auto& s : r.problems)
            msg += s + "; ";
        CHECK_MESSAGE(r.ok(), r.name << ": " << msg);
    }
}

TEST_CASE("tensor n = 1 mod 8: h0 edge in stem 2n-1")
{
    auto o = o_module(17);
    auto c = ext_chart(minimal_resolution(tensor(o, o, 32, 34), 3, 37));
    CHECK(edge_between(c, 0, "y_{n-1}(x)y_n + y_n(x)y_{n-1}", "h1 y_{n-1}(x)y_{n-1}"));
}

TEST_CASE("no differentials in the assembly windows")
{
    for (int n : {16, 17, 20, 24, 25}) {
        auto s = d2_splitting_summands(n, n % 8);
        auto d2 = ext_chart(minimal_resolution(s.d2_part, 8, 2 * n + 9));
        CHECK(check_no_differentials(d2, 2 * n - 2, 2 * n).empty());
        auto o = o_module(n);
        auto t = ext_chart(minimal_resolution(tensor(o, o, 2 * n - 2, 2 * n), 8, 2 * n + 8));
        CHECK(check_no_differentials(t, 2 * n - 2, 2 * n - 1).empty());
    }
}

TEST_CASE("synthetic chart reports a possible differential")
{
    ExtChart c;
    c.max_s = 4;
    c.max_t = 40;
    c.classes = {{0, 10, "a"}, {2, 11, "b"}};
    auto arrows = check_no_differentials(c, 9, 10);
    REQUIRE(arrows.size() == 1);
    CHECK(arrows[0].stem == 10);
    CHECK(arrows[0].r == 2);
    CHECK_THROWS_AS(homotopy_from_chart(c, 10), RefusalError);
}

TEST_CASE("homotopy read from h0 strings")
{
    auto o1 = o_module(17);
    auto t1 = ext_chart(minimal_resolution(tensor(o1, o1, 32, 34), 8, 42));
    CHECK(homotopy_from_chart(t1, 33) == AbelianGroup::cyclic(4));

    auto o0 = o_module(16);
    auto t0 = ext_chart(minimal_resolution(tensor(o0, o0, 30, 32), 8, 40));
    CHECK(homotopy_from_chart(t0, 30) == AbelianGroup::z());

    auto d = ext_chart(minimal_resolution(d2_splitting_summands(12, 4).d2_part, 8, 33));
    CHECK(homotopy_from_chart(d, 24) == AbelianGroup::cyclic(2) + AbelianGroup::cyclic(2));
}

TEST_CASE("chart JSON round trip")
{
    const auto& c = sphere_chart();
    auto back = chart_from_json(chart_to_json(c));
    REQUIRE(back.classes.size() == c.classes.size());
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        CHECK(back.classes[i].label == c.classes[i].label);
        CHECK(back.classes[i].s == c.classes[i].s);
        CHECK(back.classes[i].t == c.classes[i].t);
    }
    CHECK(back.edges == c.edges);
    CHECK(chart_ascii(c, 0, 20).size() > 0);
}
