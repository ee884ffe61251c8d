#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wingreg/errors.hpp"
#include "wingreg/linkage.hpp"

namespace wingreg {

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw IoError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw IoError("unknown key '" + key + "' in " + where);
    }
}

inline double number_at(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw IoError("missing key '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number()) throw IoError("key '" + std::string(key) + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

inline std::string string_at(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw IoError("missing key '" + std::string(key) + "' in " + where);
    if (!obj[key].is_string()) throw IoError("key '" + std::string(key) + "' in " + where + " must be a string");
    return obj[key].get<std::string>();
}

}  // namespace detail

inline LinkageDef linkage_from_json(const nlohmann::json& doc, const std::string& where = "linkage") {
    detail::require_keys(doc, where, {"points", "bars", "driver"});
    if (!doc.contains("points") || !doc["points"].is_array())
        throw IoError(where + " needs a 'points' array");
    if (!doc.contains("bars") || !doc["bars"].is_array())
        throw IoError(where + " needs a 'bars' array");
    if (!doc.contains("driver")) throw IoError(where + " needs a 'driver' object");

    std::vector<PointDef> points;
    for (const auto& p : doc["points"]) {
        detail::require_keys(p, "point", {"id", "ground", "x", "y", "guess_x", "guess_y"});
        PointDef pt;
        pt.id = detail::string_at(p, "id", "point");
        pt.ground = p.contains("ground") && p["ground"].is_boolean() && p["ground"].get<bool>();
        if (pt.ground) {
            pt.coords = {detail::number_at(p, "x", "ground point '" + pt.id + "'"),
                         detail::number_at(p, "y", "ground point '" + pt.id + "'")};
        } else {
            pt.coords = {detail::number_at(p, "guess_x", "free point '" + pt.id + "'"),
                         detail::number_at(p, "guess_y", "free point '" + pt.id + "'")};
        }
        points.push_back(std::move(pt));
    }

    std::vector<BarDef> bars;
    for (const auto& b : doc["bars"]) {
        detail::require_keys(b, "bar", {"a", "b", "length_mm", "name"});
        BarDef bar;
        bar.a = detail::string_at(b, "a", "bar");
        bar.b = detail::string_at(b, "b", "bar");
        bar.length_mm = detail::number_at(b, "length_mm", "bar");
        if (b.contains("name")) bar.name = detail::string_at(b, "name", "bar");
        bars.push_back(std::move(bar));
    }

    const auto& d = doc["driver"];
    detail::require_keys(d, "driver", {"pivot", "point", "name"});
    DriverDef driver{detail::string_at(d, "pivot", "driver"), detail::string_at(d, "point", "driver"),
                     detail::string_at(d, "name", "driver")};

    return LinkageDef(std::move(points), std::move(bars), std::move(driver));
}

inline LinkageDef load_linkage(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open linkage file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in '" + path + "': " + e.what());
    }
    return linkage_from_json(doc, path);
}

inline nlohmann::json linkage_to_json(const LinkageDef& def) {
    nlohmann::json doc;
    doc["points"] = nlohmann::json::array();
    for (const auto& p : def.points()) {
        nlohmann::json jp{{"id", p.id}, {"ground", p.ground}};
        if (p.ground) {
            jp["x"] = p.coords.x;
            jp["y"] = p.coords.y;
        } else {
            jp["guess_x"] = p.coords.x;
            jp["guess_y"] = p.coords.y;
        }
        doc["points"].push_back(std::move(jp));
    }
    doc["bars"] = nlohmann::json::array();
    for (const auto& b : def.bars()) {
        nlohmann::json jb{{"a", b.a}, {"b", b.b}, {"length_mm", b.length_mm}};
        if (!b.name.empty()) jb["name"] = b.name;
        doc["bars"].push_back(std::move(jb));
    }
    doc["driver"] = {{"pivot", def.driver().pivot},
                     {"point", def.driver().point},
                     {"name", def.driver().name}};
    return doc;
}

}  // namespace wingreg
