#include "synopsis/io.hpp"

#include "synopsis/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace synopsis {

using nlohmann::json;

namespace {

bool is_flat(const json& j) {
    for (const auto& e : j) {
        if (e.is_structured()) return false;
    }
    return true;
}

/// Pretty printer that keeps arrays of scalars on one line, so box records and
/// mapping entries stay one per line.
void format_json(const json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += inner + json(it.key()).dump() + ": ";
            format_json(it.value(), indent + 2, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "}";
    } else if (j.is_array() && !j.empty() && !is_flat(j)) {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += inner;
            format_json(j[i], indent + 2, out);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "]";
    } else if (j.is_array()) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += (i ? ", " : "") + j[i].dump();
        }
        out += "]";
    } else {
        out += j.dump();
    }
}

std::string to_text(const json& j) {
    std::string out;
    format_json(j, 0, out);
    out += '\n';
    return out;
}

json parse_text(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

void expect_header(const json& j, const char* format) {
    if (!j.is_object() || j.value("format", std::string{}) != format) {
        throw ValidationError(std::string("not a ") + format + " file");
    }
    if (j.value("version", 0) != kFormatVersion) {
        throw ValidationError(std::string(format) + ": unsupported version");
    }
}

Tube tube_from_json(const json& jt, std::size_t index) {
    const std::string where = "tube #" + std::to_string(index);
    TubeId id = 0;
    try {
        id = jt.at("id").get<TubeId>();
    } catch (const json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    }
    std::vector<BoundingBox> boxes;
    const auto& records = jt.at("boxes");
    if (!records.is_array()) {
        throw ValidationError("tube " + std::to_string(id) + ": boxes must be an array");
    }
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (!rec.is_array() || rec.size() != 5) {
            throw ValidationError("tube " + std::to_string(id) + ", record " + std::to_string(r) +
                                  ": expected [frame, x, y, w, h]");
        }
        try {
            boxes.push_back(BoundingBox{rec[0].get<Frame>(), rec[1].get<int>(), rec[2].get<int>(), rec[3].get<int>(),
                                        rec[4].get<int>()});
        } catch (const json::exception& e) {
            throw ValidationError("tube " + std::to_string(id) + ", record " + std::to_string(r) + ": " + e.what());
        }
    }
    return Tube(id, std::move(boxes));
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

json tube_db_to_json(const TubeDatabase& db) {
    const auto& scene = db.scene();
    json j;
    j["format"] = kTubeDbFormat;
    j["version"] = kFormatVersion;
    j["scene"] = {{"width", scene.width},
                  {"height", scene.height},
                  {"fps", json::array({scene.fps.num, scene.fps.den})},
                  {"background", scene.background ? json(*scene.background) : json(nullptr)}};
    json tubes = json::array();
    for (const auto& [id, t] : db.tubes()) {
        json boxes = json::array();
        for (const auto& b : t.boxes()) {
            boxes.push_back(json::array({b.frame, b.x, b.y, b.w, b.h}));
        }
        tubes.push_back({{"id", id}, {"boxes", std::move(boxes)}});
    }
    j["tubes"] = std::move(tubes);
    return j;
}

TubeDatabase tube_db_from_json(const json& j) {
    expect_header(j, kTubeDbFormat);
    SceneInfo scene;
    try {
        const auto& js = j.at("scene");
        scene.width = js.at("width").get<int>();
        scene.height = js.at("height").get<int>();
        const auto& fps = js.at("fps");
        scene.fps = FrameRate{fps.at(0).get<std::int64_t>(), fps.at(1).get<std::int64_t>()};
        if (js.contains("background") && !js.at("background").is_null()) {
            scene.background = js.at("background").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene: ") + e.what());
    }
    std::vector<Tube> tubes;
    const auto& jt = j.at("tubes");
    for (std::size_t i = 0; i < jt.size(); ++i) {
        tubes.push_back(tube_from_json(jt[i], i));
    }
    return TubeDatabase(std::move(scene), std::move(tubes));
}

std::string serialize_tube_db(const TubeDatabase& db) {
    return to_text(tube_db_to_json(db));
}

TubeDatabase parse_tube_db(const std::string& text) {
    const json j = parse_text(text, "tube database");
    try {
        return tube_db_from_json(j);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("tube database: ") + e.what());
    }
}

void save_tube_db(const TubeDatabase& db, const std::filesystem::path& path) {
    write_text_file(path, serialize_tube_db(db));
}

TubeDatabase load_tube_db(const std::filesystem::path& path) {
    return parse_tube_db(read_text_file(path));
}

std::string content_hash(const TubeDatabase& db) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(serialize_tube_db(db))));
    return buf;
}

json params_to_json(const Params& p) {
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"chrono_constant", p.chrono_constant},
            {"collision_weight", p.collision_weight},
            {"collision_budget", p.collision_budget},
            {"grouping_mode", std::string(to_string(p.grouping_mode))},
            {"sigma_mode", std::string(to_string(p.sigma_mode))}};
}

Params params_from_json(const json& j) {
    Params p;
    try {
        p.alpha = j.at("alpha").get<double>();
        p.beta = j.at("beta").get<double>();
        p.chrono_constant = j.at("chrono_constant").get<double>();
        p.collision_weight = j.at("collision_weight").get<double>();
        p.collision_budget = j.at("collision_budget").get<double>();
        p.grouping_mode = parse_grouping_mode(j.at("grouping_mode").get<std::string>());
        p.sigma_mode = parse_sigma_mode(j.at("sigma_mode").get<std::string>());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("params: ") + e.what());
    }
    p.validate();
    return p;
}

json energy_to_json(const EnergyBreakdown& e) {
    json pairs = json::array();
    for (const auto& t : e.pairs) {
        pairs.push_back(json::array({t.a, t.b, t.temporal, t.chrono, t.collision}));
    }
    return {{"activity", e.activity}, {"temporal", e.temporal}, {"chrono", e.chrono},
            {"collision", e.collision}, {"total", e.total},     {"pairs", std::move(pairs)}};
}

std::string serialize_schedule(const SynopsisSchedule& s, const TubeDatabase& db) {
    json j;
    j["format"] = kScheduleFormat;
    j["version"] = kFormatVersion;
    j["tubedb_hash"] = content_hash(db);
    j["params"] = params_to_json(s.params);
    j["length"] = s.length;
    json groups = json::array();
    for (const auto& g : s.groups.groups) {
        groups.push_back(g.members);
    }
    j["grouping"] = {{"alpha", s.groups.alpha},
                     {"beta", s.groups.beta},
                     {"mode", std::string(to_string(s.groups.mode))},
                     {"groups", std::move(groups)}};
    json mapping = json::array();
    for (const auto& [id, shift] : s.mapping.shifts()) {
        mapping.push_back(json::array({id, shift}));
    }
    j["mapping"] = std::move(mapping);
    j["energy"] = energy_to_json(s.energy);
    return to_text(j);
}

SynopsisSchedule parse_schedule(const std::string& text, const TubeDatabase& db) {
    const json j = parse_text(text, "schedule");
    expect_header(j, kScheduleFormat);
    const std::string expected = content_hash(db);
    const std::string recorded = j.value("tubedb_hash", std::string{});
    if (recorded != expected) {
        throw StaleReferenceError("schedule was built for tube database " + recorded + ", given " + expected);
    }
    SynopsisSchedule s;
    try {
        s.params = params_from_json(j.at("params"));
        s.length = j.at("length").get<Frame>();
        const auto& jg = j.at("grouping");
        s.groups.alpha = jg.at("alpha").get<double>();
        s.groups.beta = jg.at("beta").get<double>();
        s.groups.mode = parse_grouping_mode(jg.at("mode").get<std::string>());
        for (const auto& members : jg.at("groups")) {
            s.groups.groups.push_back(Group{members.get<std::vector<TubeId>>()});
        }
        for (const auto& entry : j.at("mapping")) {
            s.mapping.set(entry.at(0).get<TubeId>(), entry.at(1).get<Frame>());
        }
        const auto& je = j.at("energy");
        s.energy.activity = je.at("activity").get<double>();
        s.energy.temporal = je.at("temporal").get<double>();
        s.energy.chrono = je.at("chrono").get<double>();
        s.energy.collision = je.at("collision").get<double>();
        s.energy.total = je.at("total").get<double>();
        for (const auto& t : je.at("pairs")) {
            s.energy.pairs.push_back(PairTerms{t.at(0).get<TubeId>(), t.at(1).get<TubeId>(), t.at(2).get<double>(),
                                               t.at(3).get<double>(), t.at(4).get<double>()});
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("schedule: ") + e.what());
    }
    validate_mapping(db, s.mapping);
    validate_partition(db, s.groups);
    return s;
}

void save_schedule(const SynopsisSchedule& s, const TubeDatabase& db, const std::filesystem::path& path) {
    write_text_file(path, serialize_schedule(s, db));
}

SynopsisSchedule load_schedule(const std::filesystem::path& path, const TubeDatabase& db) {
    return parse_schedule(read_text_file(path), db);
}

std::string format_curve_csv(std::span<const SweepRow> rows) {
    std::string out = "param,length,energy\n";
    for (const auto& r : rows) {
        out += format_g6(r.value) + "," + format_g6(static_cast<double>(r.length)) + "," + format_g6(r.energy) + "\n";
    }
    return out;
}

void export_curve_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
    write_text_file(path, format_curve_csv(rows));
}

std::vector<SweepRow> load_curve_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "param,length,energy") {
        throw ValidationError(path.string() + ": missing curve header");
    }
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        SweepRow row;
        double length = 0.0;
        char tail = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &row.value, &length, &row.energy, &tail) != 3) {
            throw ValidationError(path.string() + ", line " + std::to_string(lineno) + ": malformed row");
        }
        row.length = static_cast<Frame>(length);
        rows.push_back(row);
    }
    return rows;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace synopsis
