#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wingreg/csv.hpp"
#include "wingreg/errors.hpp"
#include "wingreg/flap_data.hpp"

namespace wingreg {

inline const std::vector<std::string> kForceCsvHeader = {"t_s",    "fx_N",   "fy_N",  "fz_N",
                                                         "tx_Nmm", "ty_Nmm", "tz_Nmm"};
inline const std::vector<std::string> kAngleCsvHeader = {"t_s", "angle_rad"};

inline ForceRecord load_force_csv(const std::string& path, double nominal_rate_hz = 7000.0) {
    CsvTable table = read_csv(path);
    if (table.header != kForceCsvHeader)
        throw IoError("unexpected force CSV header in '" + path +
                      "' (expected t_s,fx_N,fy_N,fz_N,tx_Nmm,ty_Nmm,tz_Nmm)");
    ForceRecord rec;
    rec.nominal_rate_hz = nominal_rate_hz;
    rec.samples.reserve(table.rows.size());
    for (const auto& row : table.rows)
        rec.samples.push_back({row[0], {row[1], row[2], row[3], row[4], row[5], row[6]}});
    rec.validate();
    return rec;
}

inline void write_force_csv(const std::string& path, const ForceRecord& rec) {
    std::vector<std::vector<double>> rows;
    rows.reserve(rec.samples.size());
    for (const auto& s : rec.samples)
        rows.push_back({s.t_s, s.ch[0], s.ch[1], s.ch[2], s.ch[3], s.ch[4], s.ch[5]});
    write_csv(path, kForceCsvHeader, rows);
}

inline AngleRecord load_angle_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.header != kAngleCsvHeader)
        throw IoError("unexpected angle CSV header in '" + path + "' (expected t_s,angle_rad)");
    std::vector<AngleSample> samples;
    samples.reserve(table.rows.size());
    for (const auto& row : table.rows) samples.push_back({row[0], row[1]});
    AngleRecord rec = AngleRecord::from_samples(std::move(samples));
    rec.validate();
    return rec;
}

inline void write_angle_csv(const std::string& path, const AngleRecord& rec) {
    std::vector<std::vector<double>> rows;
    rows.reserve(rec.samples.size());
    for (const auto& s : rec.samples) rows.push_back({s.t_s, s.angle_rad});
    write_csv(path, kAngleCsvHeader, rows);
}

struct ManifestEntry {
    double r1_length_mm;
    double frequency_hz;
    int trial;
    std::string force_csv;
    std::string angle_csv;
    std::optional<std::pair<double, double>> quiet_window_s;
};

// Condition manifest: JSON array of trial descriptors. Paths are resolved
// relative to the manifest's directory by the caller.
inline std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in '" + path + "': " + e.what());
    }
    if (!doc.is_array()) throw IoError("manifest must be a JSON array");

    std::vector<ManifestEntry> entries;
    for (const auto& item : doc) {
        if (!item.is_object()) throw IoError("manifest entries must be objects");
        for (const auto& [key, value] : item.items()) {
            if (key != "r1_length_mm" && key != "frequency_hz" && key != "trial" &&
                key != "force_csv" && key != "angle_csv" && key != "quiet_window_s")
                throw IoError("unknown key '" + key + "' in manifest entry");
        }
        ManifestEntry e;
        if (!item.contains("r1_length_mm") || !item["r1_length_mm"].is_number())
            throw IoError("manifest entry missing numeric 'r1_length_mm'");
        if (!item.contains("frequency_hz") || !item["frequency_hz"].is_number())
            throw IoError("manifest entry missing numeric 'frequency_hz'");
        if (!item.contains("trial") || !item["trial"].is_number_integer())
            throw IoError("manifest entry missing integer 'trial'");
        if (!item.contains("force_csv") || !item["force_csv"].is_string())
            throw IoError("manifest entry missing 'force_csv'");
        if (!item.contains("angle_csv") || !item["angle_csv"].is_string())
            throw IoError("manifest entry missing 'angle_csv'");
        e.r1_length_mm = item["r1_length_mm"].get<double>();
        e.frequency_hz = item["frequency_hz"].get<double>();
        e.trial = item["trial"].get<int>();
        e.force_csv = item["force_csv"].get<std::string>();
        e.angle_csv = item["angle_csv"].get<std::string>();
        if (item.contains("quiet_window_s")) {
            const auto& w = item["quiet_window_s"];
            if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
                throw IoError("'quiet_window_s' must be [t0, t1]");
            e.quiet_window_s = {{w[0].get<double>(), w[1].get<double>()}};
        }
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw IoError("manifest lists no trials");
    return entries;
}

}  // namespace wingreg
