#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcm/stmodule.hpp"

#include <algorithm>
#include <set>

using namespace hcm;

namespace {

std::set<std::tuple<int, std::string, std::string>> edge_set(const GradedModule& m)
{
    std::set<std::tuple<int, std::string, std::string>> s;
    for (const auto& e : to_cells(m).edges)
        s.insert({e.sq, e.from, e.to});
    return s;
}

// Monomials in generators of degree 2, 3, 7, 15, ... counted by degree.
std::size_t poly_dim(int d)
{
    std::vector<std::size_t> p(d + 1, 0);
    p[0] = 1;
    std::vector<int> gens{2};
    for (int k = 2; (1 << k) - 1 <= d; ++k)
        gens.push_back((1 << k) - 1);
    for (int g : gens)
        for (int x = g; x <= d; ++x)
            p[x] += p[x - g];
    return p[d];
}

bool same_action(const GradedModule& a, const GradedModule& b)
{
    if (a.lo() != b.lo() || a.hi() != b.hi())
        return false;
    for (int d = a.lo(); d <= a.hi(); ++d) {
        if (a.labels(d) != b.labels(d))
            return false;
        for (int k = 1; d + k <= a.hi(); ++k)
            if (!(a.act(k, d) == b.act(k, d)))
                return false;
    }
    return true;
}

}  // namespace

TEST_CASE("o<n-1> for n = 0 mod 8 is a single cell")
{
    auto m = o_module(16);
    CHECK(m.lo() == 15);
    CHECK(m.hi() == 18);
    CHECK(m.total_dim() == 1);
    CHECK(m.dim(15) == 1);
    CHECK(edge_set(m).empty());
    CHECK(validate(m).empty());
}

TEST_CASE("o<n-1> for n = 1 mod 8")
{
    auto m = o_module(17);
    CHECK(m.dim(16) == 1);
    CHECK(m.dim(17) == 1);
    CHECK(m.dim(18) == 0);
    CHECK(m.dim(19) == 1);
    CHECK(edge_set(m) == decltype(edge_set(m)){{1, "y_n", "y_{n-1}"}, {2, "y_{n+2}", "y_n"}});
    CHECK(validate(m).empty());
}

TEST_CASE("o<n-1> for n = 4 mod 8")
{
    auto m = o_module(12);
    CHECK(m.dim(11) == 1);
    CHECK(m.dim(12) == 0);
    CHECK(m.dim(13) == 1);
    CHECK(m.dim(14) == 1);
    CHECK(edge_set(m) == decltype(edge_set(m)){{2, "y_{n+1}", "y_{n-1}"}, {1, "y_{n+2}", "y_{n+1}"}});
    CHECK(validate(m).empty());
    // Sq^3 on the bottom class is forced by Sq^1 Sq^2.
    CHECK(m.act(3, 11).get(0, 0));
}

TEST_CASE("cell counts match the diagrams for many n")
{
    for (int n = 8; n <= 64; ++n) {
        int r = n % 8;
        if (r != 0 && r != 1 && r != 4)
            continue;
        auto m = o_module(n);
        CHECK(m.total_dim() == o_diagram(n).cells.size());
        CHECK(validate(m).empty());
    }
    CHECK_THROWS_AS(o_module(10), InputError);
    CHECK_THROWS_AS(o_module(2), RangeError);
}

TEST_CASE("a corrupted module reports the (1,1) relation")
{
    GradedModule m(0, 2);
    m.unstable = false;
    m.set_basis(0, {"a"});
    m.set_basis(1, {"b"});
    m.set_basis(2, {"c"});
    m.act_mut(1, 0).set(0, 0);
    m.act_mut(1, 1).set(0, 0);
    auto v = validate(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].relation == "(1,1)");
    CHECK(v[0].degree == 0);
}

TEST_CASE("an unstable action below excess is reported")
{
    GradedModule m(0, 1);
    m.set_basis(0, {"a"});
    m.set_basis(1, {"b"});
    m.act_mut(1, 0).set(0, 0);
    auto v = validate(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].relation == "unstable");
}

TEST_CASE("edge degree mismatch is a diagram error")
{
    CellDiagram dg;
    dg.cells = {{"a", 0}, {"b", 2}};
    dg.edges = {{"b", "a", 1}};
    CHECK_THROWS_AS(from_cells(dg, 0, 2, false), InputError);
}

TEST_CASE("homology of HZ has polynomial dimensions and a valid action")
{
    auto z = z_module(16);
    for (int d = 0; d <= 16; ++d)
        CHECK(z.dim(d) == poly_dim(d));
    CHECK(validate(z).empty());

    auto small = z_module(4);
    CHECK(small.labels(2) == std::vector<std::string>{"z1^2"});
    CHECK(small.labels(4) == std::vector<std::string>{"z1^4"});
    CHECK(validate(small).empty());
    CHECK(edge_set(small).count({2, "z1^2", "1"}));
    CHECK(edge_set(small).count({4, "z1^4", "1"}));
}

TEST_CASE("tensor square of o<n-1>")
{
    auto o = o_module(16);
    auto t = tensor(o, o, 30, 32);
    CHECK(t.total_dim() == 1);
    CHECK(t.labels(30) == std::vector<std::string>{"y_{n-1}(x)y_{n-1}"});
    CHECK(edge_set(t).empty());

    auto o1 = o_module(17);
    auto t1 = tensor(o1, o1, 32, 34);
    CHECK(t1.dim(32) == 1);
    CHECK(t1.dim(33) == 2);
    CHECK(t1.dim(34) == 1);
    CHECK(edge_set(t1) == decltype(edge_set(t1)){
                              {1, "y_n(x)y_n", "y_{n-1}(x)y_n"},
                              {1, "y_n(x)y_n", "y_n(x)y_{n-1}"},
                              {1, "y_{n-1}(x)y_n", "y_{n-1}(x)y_{n-1}"},
                              {1, "y_n(x)y_{n-1}", "y_{n-1}(x)y_{n-1}"},
                              {2, "y_n(x)y_n", "y_{n-1}(x)y_{n-1}"},
                          });
    CHECK(validate(t1).empty());
}

TEST_CASE("unit module is a unit for tensor")
{
    auto u = sphere_module(0);
    for (int n : {12, 16, 17}) {
        auto m = o_module(n);
        auto t = tensor(u, m, m.lo(), m.hi());
        for (int d = m.lo(); d <= m.hi(); ++d) {
            REQUIRE(t.dim(d) == m.dim(d));
            for (int k = 1; d + k <= m.hi(); ++k)
                CHECK(t.act(k, d) == m.act(k, d));
        }
    }
}

TEST_CASE("tensor is symmetric under the swap")
{
    for (int n : {12, 17, 20, 25}) {
        auto o = o_module(n);
        auto z = z_module(5);
        for (auto [a, b] : {std::pair{o, o}, std::pair{o, z}}) {
            int lo = a.bottom_degree() + b.bottom_degree(), hi = lo + 3;
            auto ab = tensor(a, b, lo, hi), ba = tensor(b, a, lo, hi);
            CHECK(validate(ab).empty());
            auto swap = [](const std::string& l) {
                auto p = l.find("(x)");
                return l.substr(p + 3) + "(x)" + l.substr(0, p);
            };
            for (int d = lo; d <= hi; ++d) {
                REQUIRE(ab.dim(d) == ba.dim(d));
                std::vector<std::size_t> perm(ab.dim(d));
                for (std::size_t i = 0; i < ab.dim(d); ++i) {
                    auto l = swap(ab.label(d, i));
                    auto it = std::find(ba.labels(d).begin(), ba.labels(d).end(), l);
                    REQUIRE(it != ba.labels(d).end());
                    perm[i] = it - ba.labels(d).begin();
                }
                for (int k = 1; d + k <= hi; ++k)
                    for (std::size_t i = 0; i < ab.dim(d); ++i)
                        for (std::size_t j = 0; j < ab.dim(d + k); ++j) {
                            auto l = swap(ab.label(d + k, j));
                            auto jt = std::find(ba.labels(d + k).begin(), ba.labels(d + k).end(), l) -
                                      ba.labels(d + k).begin();
                            CHECK(ab.act(k, d).get(j, i) == ba.act(k, d).get(jt, perm[i]));
                        }
            }
        }
    }
}

TEST_CASE("cells and JSON round trip")
{
    std::vector<GradedModule> ms{o_module(16), o_module(17), o_module(12), z_module(10), sphere_module(3)};
    auto o = o_module(17);
    ms.push_back(tensor(o, o, 32, 34));
    for (const auto& m : ms) {
        auto back = from_cells(to_cells(m), m.lo(), m.hi(), m.unstable);
        CHECK(same_action(m, back));
        auto j = module_from_json(module_to_json(m));
        CHECK(same_action(m, j));
        CHECK(j.truncated == m.truncated);
    }
}

TEST_CASE("module file errors")
{
    CHECK_THROWS_AS(load_module("/nonexistent/module.json"), InputError);
    CHECK_THROWS_AS(module_from_json(nlohmann::json::parse(R"({"cells": []})")), InputError);
    CHECK_THROWS_AS(module_from_json(nlohmann::json::parse(R"({"window": [3, 1], "cells": []})")), RangeError);
    auto j = nlohmann::json::parse(
        R"({"window": [0, 1], "cells": [{"label": "a", "degree": 0}, {"label": "b", "degree": 1}],
            "edges": [{"from": "b", "to": "a", "sq": 1}], "unstable": false})");
    auto m = module_from_json(j);
    CHECK(m.act(1, 0).get(0, 0));
}
