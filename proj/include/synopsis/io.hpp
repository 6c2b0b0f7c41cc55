#pragma once

#include "synopsis/scheduler.hpp"
#include "synopsis/tube.hpp"

#include "json.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace synopsis {

inline constexpr const char* kTubeDbFormat = "synopsis-tubedb";
inline constexpr const char* kScheduleFormat = "synopsis-schedule";
inline constexpr int kFormatVersion = 1;

nlohmann::json tube_db_to_json(const TubeDatabase& db);
/// Errors name the tube id and record index that broke an invariant.
TubeDatabase tube_db_from_json(const nlohmann::json& j);

std::string serialize_tube_db(const TubeDatabase& db);
TubeDatabase parse_tube_db(const std::string& text);

void save_tube_db(const TubeDatabase& db, const std::filesystem::path& path);
TubeDatabase load_tube_db(const std::filesystem::path& path);

/// 64-bit FNV-1a over the canonical serialization, as 16 hex digits.
std::string content_hash(const TubeDatabase& db);

nlohmann::json params_to_json(const Params& p);
Params params_from_json(const nlohmann::json& j);

nlohmann::json energy_to_json(const EnergyBreakdown& e);

std::string serialize_schedule(const SynopsisSchedule& s, const TubeDatabase& db);
/// StaleReferenceError when the schedule was written against a different database.
SynopsisSchedule parse_schedule(const std::string& text, const TubeDatabase& db);

void save_schedule(const SynopsisSchedule& s, const TubeDatabase& db, const std::filesystem::path& path);
SynopsisSchedule load_schedule(const std::filesystem::path& path, const TubeDatabase& db);

/// Header "param,length,energy", one row per sample, 6 significant digits.
std::string format_curve_csv(std::span<const SweepRow> rows);
void export_curve_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);
std::vector<SweepRow> load_curve_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace synopsis
