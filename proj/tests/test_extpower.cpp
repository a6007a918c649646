#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcm/extpower.hpp"

#include <set>

using namespace hcm;

namespace {

using EdgeSet = std::set<std::tuple<int, std::string, std::string>>;

EdgeSet edge_set(const GradedModule& m)
{
    EdgeSet s;
    for (const auto& e : to_cells(m).edges)
        s.insert({e.sq, e.from, e.to});
    return s;
}

std::set<std::pair<std::string, int>> cell_set(const GradedModule& m)
{
    std::set<std::pair<std::string, int>> s;
    for (const auto& c : to_cells(m).cells)
        s.insert({c.label, c.degree});
    return s;
}

}  // namespace

TEST_CASE("D2 of o<n-1>, n = 0 mod 8")
{
    auto s = d2_splitting_summands(16, 0);
    CHECK(s.bo_part.total_dim() == 1);
    CHECK(cell_set(s.d2_part) == std::set<std::pair<std::string, int>>{
                                     {"Q0(y_{n-1})", 30}, {"Q1(y_{n-1})", 31}, {"Q2(y_{n-1})", 32}, {"Q3(y_{n-1})", 33}});
    CHECK(edge_set(s.d2_part) == EdgeSet{{1, "Q1(y_{n-1})", "Q0(y_{n-1})"},
                                         {1, "Q3(y_{n-1})", "Q2(y_{n-1})"},
                                         {2, "Q2(y_{n-1})", "Q0(y_{n-1})"}});
}

TEST_CASE("D2 of o<n-1>, n = 1 mod 8")
{
    auto s = d2_splitting_summands(17, 1);
    auto cells = cell_set(s.d2_part);
    for (auto l : {"Q0(y_{n-1})", "Q1(y_{n-1})", "Q2(y_{n-1})", "Q3(y_{n-1})", "Q0(y_n)", "Q1(y_n)", "y_{n-1}.y_n",
                   "y_{n-1}.y_{n+2}"}) {
        bool found = false;
        for (auto& c : cells)
            found |= c.first == l;
        CHECK_MESSAGE(found, l);
    }
    CHECK(cells.size() == 8);
    CHECK(edge_set(s.d2_part) == EdgeSet{{1, "y_{n-1}.y_n", "Q0(y_{n-1})"},
                                         {1, "Q2(y_{n-1})", "Q1(y_{n-1})"},
                                         {1, "Q1(y_n)", "Q0(y_n)"},
                                         {2, "Q0(y_n)", "Q0(y_{n-1})"},
                                         {2, "Q1(y_n)", "Q1(y_{n-1})"},
                                         {2, "y_{n-1}.y_{n+2}", "y_{n-1}.y_n"}});
}

TEST_CASE("D2 of o<n-1>, n = 4 mod 8")
{
    auto s = d2_splitting_summands(12, 4);
    CHECK(cell_set(s.d2_part) == std::set<std::pair<std::string, int>>{{"Q0(y_{n-1})", 22},
                                                                       {"Q1(y_{n-1})", 23},
                                                                       {"Q2(y_{n-1})", 24},
                                                                       {"y_{n-1}.y_{n+1}", 24},
                                                                       {"Q3(y_{n-1})", 25},
                                                                       {"y_{n-1}.y_{n+2}", 25}});
    CHECK(edge_set(s.d2_part).count({2, "y_{n-1}.y_{n+1}", "Q0(y_{n-1})"}));
    CHECK(edge_set(s.d2_part).count({1, "y_{n-1}.y_{n+2}", "y_{n-1}.y_{n+1}"}));
}

TEST_CASE("edge pattern is the same for every n in a residue class")
{
    for (int r : {0, 1, 4}) {
        auto base = edge_set(d2_splitting_summands(16 + r, r).d2_part);
        for (int n = 8 + r; n <= 64; n += 8)
            CHECK(edge_set(d2_splitting_summands(n, r).d2_part) == base);
    }
}

TEST_CASE("D2 of a single cell")
{
    auto m = d2_sphere(15, 30, 33);
    CHECK(m.total_dim() == 4);
    auto e = edge_set(m);
    CHECK(e.count({1, "Q1(i)", "Q0(i)"}));
    CHECK(e.count({2, "Q2(i)", "Q0(i)"}));
    CHECK_FALSE(e.count({2, "Q3(i)", "Q1(i)"}));
}

TEST_CASE("D2 of a suspended HZ")
{
    auto m = d2_sigma_z(15, 30, 33);
    auto cells = cell_set(m);
    CHECK(cells.count({"i.(z1^2 i)", 32}));
    CHECK(cells.count({"i.(z2 i)", 33}));
    CHECK(cells.count({"Q0(i)", 30}));
    CHECK(cells.count({"Q3(i)", 33}));
    CHECK(validate(m).empty());
}

TEST_CASE("outputs validate and Q classes sit in degree 2|x| + i")
{
    for (int n = 8; n <= 48; ++n) {
        int r = n % 8;
        if (r != 0 && r != 1 && r != 4)
            continue;
        auto o = o_module(n);
        std::vector<DLClass> cls;
        auto m = d2_homology(o, 2 * n - 2, 2 * n + 1, &cls);
        CHECK(validate(m).empty());
        std::size_t count = 0;
        for (int d = m.lo(); d <= m.hi(); ++d)
            count += m.dim(d);
        CHECK(cls.size() == count);
        for (const auto& c : cls) {
            if (c.kind == DLClass::Q)
                CHECK(c.degree == 2 * c.x.first + c.i);
            else {
                CHECK(c.degree == c.x.first + c.y.first);
                CHECK(c.x < c.y);
            }
        }
    }
    for (int c = 4; c <= 15; ++c) {
        CHECK(validate(d2_sphere(c, 2 * c, 3 * c - 1)).empty());
        CHECK(validate(d2_sigma_z(c, 2 * c, 2 * c + 3)).empty());
    }
}

TEST_CASE("product classes are the symmetric tensors")
{
    // In X (x) X the swap-invariant part of degree d has dimension
    // (#ordered pairs x != y)/2 + #{x : 2|x| = d}; that is #products + #Q0 in degree d.
    for (int n : {12, 17, 20, 25}) {
        auto o = o_module(n);
        std::vector<DLClass> cls;
        d2_homology(o, 2 * n - 2, 2 * n + 1, &cls);
        auto t = tensor(o, o, 2 * n - 2, 2 * n + 1);
        for (int d = 2 * n - 2; d <= 2 * n + 1; ++d) {
            std::size_t diag = 0;
            for (int e = o.lo(); e <= o.hi(); ++e)
                if (2 * e == d)
                    diag += o.dim(e);
            std::size_t products = 0, q0 = 0;
            for (const auto& c : cls)
                if (c.degree == d) {
                    products += c.kind == DLClass::Product;
                    q0 += c.kind == DLClass::Q && c.i == 0;
                }
            CHECK(q0 == diag);
            CHECK(2 * products + diag == t.dim(d));
        }
    }
}

TEST_CASE("range and residue errors")
{
    auto o = o_module(16);
    CHECK_THROWS_AS(d2_homology(o, 2 * 15, 3 * 15), RangeError);
    CHECK_THROWS_AS(d2_splitting_summands(16, 2), InputError);
    CHECK_THROWS_AS(d2_splitting_summands(17, 0), InputError);
    CHECK_THROWS_AS(d2_sphere(5, 10, 20), RangeError);
}
