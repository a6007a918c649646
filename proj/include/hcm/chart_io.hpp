#pragma once

#include "hcm/errors.hpp"
#include "hcm/resolution.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <sstream>
#include <string>

namespace hcm {

inline nlohmann::json chart_to_json(const ExtChart& c)
{
    using nlohmann::json;
    json j;
    j["schema"] = 1;
    j["max_s"] = c.max_s;
    j["max_t"] = c.max_t;
    j["valid_stem_max"] = c.valid_stem_max == INT_MAX ? json(nullptr) : json(c.valid_stem_max);
    std::map<std::pair<int, int>, int> dims;
    for (const auto& k : c.classes)
        ++dims[{k.s, k.t}];
    j["dims"] = json::array();
    for (auto& [st, d] : dims)
        j["dims"].push_back({st.first, st.second, d});
    j["classes"] = json::array();
    for (const auto& k : c.classes)
        j["classes"].push_back({{"s", k.s}, {"t", k.t}, {"label", k.label}});
    j["products"] = json::array();
    for (const auto& e : c.edges)
        j["products"].push_back({{"h", e.k}, {"from", e.from}, {"to", e.to}});
    j["torsion_free_top"] = c.torsion_free_top;
    if (!c.notes.empty())
        j["notes"] = c.notes;
    return j;
}

inline ExtChart chart_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("schema").get<int>() != 1)
            throw InputError("unsupported chart schema");
        ExtChart c;
        c.max_s = j.at("max_s").get<int>();
        c.max_t = j.at("max_t").get<int>();
        c.valid_stem_max = j.at("valid_stem_max").is_null() ? INT_MAX : j.at("valid_stem_max").get<int>();
        for (auto& k : j.at("classes"))
            c.classes.push_back({k.at("s").get<int>(), k.at("t").get<int>(), k.at("label").get<std::string>()});
        for (auto& e : j.at("products"))
            c.edges.push_back({e.at("h").get<int>(), e.at("from").get<std::size_t>(), e.at("to").get<std::size_t>()});
        for (auto& s : j.at("torsion_free_top"))
            c.torsion_free_top.insert(s.get<int>());
        if (j.contains("notes"))
            c.notes = j.at("notes").get<std::vector<std::string>>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("chart format error: ") + e.what());
    }
}

// Grid of dimensions: rows are s (top = highest), columns are stems.
inline std::string chart_ascii(const ExtChart& c, int stem_lo, int stem_hi, int s_hi = -1)
{
    if (s_hi < 0)
        s_hi = c.max_s;
    std::ostringstream os;
    const int w = 4;
    for (int s = s_hi; s >= 0; --s) {
        os << (s < 10 ? " " : "") << s << " |";
        for (int k = stem_lo; k <= stem_hi; ++k) {
            auto d = c.dim(s, k + s);
            std::string cell = d ? std::to_string(d) : (s > c.cap(k) ? " " : ".");
            os << std::string(w - cell.size(), ' ') << cell;
        }
        os << "\n";
    }
    os << "   +" << std::string(w * (stem_hi - stem_lo + 1), '-') << "\n    ";
    for (int k = stem_lo; k <= stem_hi; ++k) {
        auto lab = std::to_string(k);
        os << std::string(w - lab.size(), ' ') << lab;
    }
    os << "\n";
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const auto& k = c.classes[i];
        if (k.stem() < stem_lo || k.stem() > stem_hi || k.s > s_hi)
            continue;
        os << "(" << k.stem() << "," << k.s << ") " << k.label;
        for (const auto& e : c.edges)
            if (e.from == i && c.classes[e.to].s <= s_hi && c.classes[e.to].stem() <= stem_hi)
                os << "  h" << e.k << "-> " << c.classes[e.to].label;
        os << "\n";
    }
    return os.str();
}

inline std::string chart_svg(const ExtChart& c, int stem_lo, int stem_hi, int s_hi = -1)
{
    if (s_hi < 0)
        s_hi = c.max_s;
    const int cell = 40, pad = 30;
    int W = pad * 2 + cell * (stem_hi - stem_lo + 1), H = pad * 2 + cell * (s_hi + 1);
    auto X = [&](int stem, double off) { return pad + cell * (stem - stem_lo) + cell / 2 + off; };
    auto Y = [&](int s) { return H - pad - cell * s - cell / 2; };
    std::map<std::pair<int, int>, int> seen;
    std::vector<std::pair<double, double>> pos(c.classes.size(), {-1, -1});
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const auto& k = c.classes[i];
        if (k.stem() < stem_lo || k.stem() > stem_hi || k.s > s_hi)
            continue;
        int slot = seen[{k.stem(), k.s}]++;
        pos[i] = {X(k.stem(), slot * 7.0 - 3.5 * (c.dim(k.s, k.t) - 1)), double(Y(k.s))};
    }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int k = stem_lo; k <= stem_hi; ++k)
        os << "<text x=\"" << X(k, 0) << "\" y=\"" << H - 8 << "\" font-size=\"10\" text-anchor=\"middle\">" << k
           << "</text>\n";
    for (int s = 0; s <= s_hi; ++s)
        os << "<text x=\"8\" y=\"" << Y(s) + 3 << "\" font-size=\"10\">" << s << "</text>\n";
    for (const auto& e : c.edges) {
        auto a = pos[e.from], b = pos[e.to];
        if (a.first < 0 || b.first < 0)
            continue;
        os << "<line x1=\"" << a.first << "\" y1=\"" << a.second << "\" x2=\"" << b.first << "\" y2=\"" << b.second
           << "\" stroke=\"black\"/>\n";
    }
    for (std::size_t i = 0; i < c.classes.size(); ++i)
        if (pos[i].first >= 0)
            os << "<circle cx=\"" << pos[i].first << "\" cy=\"" << pos[i].second << "\" r=\"3\"><title>"
               << c.classes[i].label << "</title></circle>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace hcm
