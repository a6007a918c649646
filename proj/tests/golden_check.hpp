#pragma once

#include "hcm/builtins.hpp"
#include "hcm/resolution.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace golden {

struct Outcome {
    std::string name;
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

inline std::vector<std::filesystem::path> fixtures()
{
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(HCM_GOLDEN_DIR))
        if (e.path().extension() == ".json")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

inline Outcome check(const std::filesystem::path& p)
{
    Outcome r{p.filename().string(), {}};
    nlohmann::json j;
    std::ifstream(p) >> j;
    int n = j.at("n").get<int>(), max_s = j.at("max_s").get<int>();
    int lo = j.at("stems")[0].get<int>(), hi = j.at("stems")[1].get<int>();
    auto m = hcm::builtin_module(j.at("module").get<std::string>(), n);
    auto c = hcm::ext_chart(hcm::minimal_resolution(m, max_s, m.hi() + max_s));

    auto in_window = [&](const hcm::ExtClass& k) { return k.stem() >= lo && k.stem() <= hi && k.s <= max_s; };
    std::set<std::tuple<int, int, std::string>> want, got;
    for (const auto& k : j.at("classes"))
        want.insert({k[0].get<int>(), k[1].get<int>(), k[2].get<std::string>()});
    for (const auto& k : c.classes)
        if (in_window(k))
            got.insert({k.stem(), k.s, k.label});
    for (const auto& w : want)
        if (!got.count(w))
            r.problems.push_back("missing class " + std::get<2>(w) + " at (" + std::to_string(std::get<0>(w)) + "," +
                                 std::to_string(std::get<1>(w)) + ")");
    for (const auto& g : got)
        if (!want.count(g))
            r.problems.push_back("unexpected class " + std::get<2>(g) + " at (" + std::to_string(std::get<0>(g)) +
                                 "," + std::to_string(std::get<1>(g)) + ")");

    std::set<std::tuple<int, std::string, std::string>> want_e, got_e;
    for (const auto& e : j.at("edges"))
        want_e.insert({e[0].get<int>(), e[1].get<std::string>(), e[2].get<std::string>()});
    for (const auto& e : c.edges)
        if (in_window(c.classes[e.from]) && in_window(c.classes[e.to]))
            got_e.insert({e.k, c.classes[e.from].label, c.classes[e.to].label});
    for (const auto& w : want_e)
        if (!got_e.count(w))
            r.problems.push_back("missing h" + std::to_string(std::get<0>(w)) + " edge " + std::get<1>(w) + " -> " +
                                 std::get<2>(w));
    for (const auto& g : got_e)
        if (!want_e.count(g))
            r.problems.push_back("unexpected h" + std::to_string(std::get<0>(g)) + " edge " + std::get<1>(g) + " -> " +
                                 std::get<2>(g));

    if (j.contains("homotopy"))
        for (auto& [stem, g] : j.at("homotopy").items()) {
            auto have = hcm::homotopy_from_chart(c, std::stoi(stem)).str();
            if (have != g.get<std::string>())
                r.problems.push_back("stem " + stem + " reads " + have + ", expected " + g.get<std::string>());
        }
    return r;
}

}  // namespace golden
