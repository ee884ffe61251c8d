#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "wingreg/errors.hpp"

namespace wingreg {

// Datasheet-level description of a slip-stick linear actuator.
struct ActuatorSpec {
    double stroke_mm = 0.0;
    double dynamic_force_gf = 0.0;  // max load while stepping
    double holding_force_gf = 0.0;  // static-friction hold when idle
    double step_size_um_min = 0.0;
    double step_size_um_max = 0.0;
    double step_size_um_default = 0.0;
    double mass_g = 0.0;

    void validate() const {
        if (!(stroke_mm > 0.0)) throw ValidationError("actuator stroke must be > 0");
        if (!(dynamic_force_gf > 0.0)) throw ValidationError("dynamic force must be > 0");
        if (!(holding_force_gf >= dynamic_force_gf))
            throw ValidationError("holding force must be >= dynamic force");
        if (!(step_size_um_min > 0.0) || !(step_size_um_max >= step_size_um_min))
            throw ValidationError("step size range must be positive and ordered");
        if (step_size_um_default < step_size_um_min || step_size_um_default > step_size_um_max)
            throw ValidationError("default step size outside its range");
        if (mass_g < 0.0) throw ValidationError("mass must be >= 0");
    }
};

inline ActuatorSpec actuator_spec_from_json(const nlohmann::json& doc,
                                            const std::string& where = "actuator spec") {
    auto require_keys = [&](const nlohmann::json& obj, const std::string& ctx,
                            std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) throw IoError(ctx + " must be a JSON object");
        for (const auto& [key, value] : obj.items()) {
            bool ok = false;
            for (const char* a : allowed)
                if (key == a) { ok = true; break; }
            if (!ok) throw IoError("unknown key '" + key + "' in " + ctx);
        }
    };
    auto num = [&](const nlohmann::json& obj, const char* key, const std::string& ctx) {
        if (!obj.contains(key) || !obj[key].is_number())
            throw IoError("missing numeric key '" + std::string(key) + "' in " + ctx);
        return obj[key].get<double>();
    };

    require_keys(doc, where,
                 {"stroke_mm", "dynamic_force_gf", "holding_force_gf", "step_size_um", "mass_g"});
    ActuatorSpec spec;
    spec.stroke_mm = num(doc, "stroke_mm", where);
    spec.dynamic_force_gf = num(doc, "dynamic_force_gf", where);
    spec.holding_force_gf = num(doc, "holding_force_gf", where);
    spec.mass_g = num(doc, "mass_g", where);
    if (!doc.contains("step_size_um")) throw IoError("missing 'step_size_um' in " + where);
    const auto& st = doc["step_size_um"];
    require_keys(st, where + ".step_size_um", {"min", "max", "default"});
    spec.step_size_um_min = num(st, "min", where);
    spec.step_size_um_max = num(st, "max", where);
    spec.step_size_um_default = num(st, "default", where);
    spec.validate();
    return spec;
}

inline ActuatorSpec load_actuator_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open actuator spec '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in '" + path + "': " + e.what());
    }
    return actuator_spec_from_json(doc, path);
}

inline nlohmann::json actuator_spec_to_json(const ActuatorSpec& s) {
    return {{"stroke_mm", s.stroke_mm},
            {"dynamic_force_gf", s.dynamic_force_gf},
            {"holding_force_gf", s.holding_force_gf},
            {"step_size_um",
             {{"min", s.step_size_um_min}, {"max", s.step_size_um_max}, {"default", s.step_size_um_default}}},
            {"mass_g", s.mass_g}};
}

}  // namespace wingreg
