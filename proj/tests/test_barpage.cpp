#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcm/barpage.hpp"

using namespace hcm;

namespace {

struct Row {
    std::string odd, even, tensor;
};

// Expected entries (s=1, 2n), (s=1, 2n+1), (s=2, 2n+1) by residue; bo summands in parentheses.
Row expected(int residue)
{
    switch (residue) {
    case 0: return {"(Z)", "Z/2 + (Z/2)", "Z/2"};
    case 1: return {"Z/2 + (Z/2)", "Z/2 + (0)", "Z/4"};
    default: return {"(Z)", "Z/2 + Z/2 + (Z/2)", "0"};
    }
}

}  // namespace

TEST_CASE("bo homotopy is Bott periodic")
{
    CHECK(pi_bo(0) == AbelianGroup::z());
    CHECK(pi_bo(9) == AbelianGroup::cyclic(2));
    CHECK(pi_bo(11) == AbelianGroup::zero());
    const char* pattern[8] = {"Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0"};
    for (int k = 0; k < 64; ++k)
        CHECK(pi_bo(k).str() == pattern[k % 8]);
}

TEST_CASE("E1 pages match the table")
{
    for (int n : {16, 17, 20, 24, 25, 32, 33, 40, 41, 48, 49}) {
        auto p = e1_page(n);
        auto want = expected(n % 8);
        CAPTURE(n);
        CHECK(p.residue == n % 8);
        CHECK(p.at(0, 2 * n).str() == "pi_" + std::to_string(2 * n) + "(S)");
        CHECK(p.at(1, 2 * n).str() == want.odd);
        CHECK(p.at(1, 2 * n + 1).str() == want.even);
        CHECK(p.at(2, 2 * n + 1).str() == want.tensor);
        for (const auto& e : p.entries)
            for (const auto& s : e.summands)
                if (s.source == "D2")
                    CHECK((s.group.is_zero() || s.group.simple_2_torsion()));
        CHECK_FALSE(e1_ascii(p).empty());
    }
}

TEST_CASE("E1 summands are read from charts")
{
    for (int n : {16, 17, 20}) {
        auto split = d2_splitting_summands(n, n % 8);
        auto d2 = ext_chart(minimal_resolution(split.d2_part, 6, 2 * n + 7));
        auto t = ext_chart(minimal_resolution(tensor(split.bo_part, split.bo_part, 2 * n - 2, 2 * n), 6, 2 * n + 6));
        CHECK(check_no_differentials(d2, 2 * n - 2, 2 * n).empty());
        CHECK(check_no_differentials(t, 2 * n - 2, 2 * n - 1).empty());
        auto p = e1_page(n);
        CHECK(p.at(1, 2 * n).summands[0].group == homotopy_from_chart(d2, 2 * n - 1));
        CHECK(p.at(1, 2 * n + 1).summands[0].group == homotopy_from_chart(d2, 2 * n));
        CHECK(p.at(2, 2 * n + 1).summands[0].group == homotopy_from_chart(t, 2 * n - 1));
    }
}

TEST_CASE("E1 page errors")
{
    CHECK_THROWS_AS(e1_page(12), InputError);
    CHECK_THROWS_AS(e1_page(18), InputError);
    CHECK_THROWS_AS(e1_page(23), InputError);
    CHECK_THROWS_AS(e1_page(20).at(3, 40), InputError);
}
