#include "fieldguard/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "fieldguard/engine.hpp"
#include "fieldguard/errors.hpp"
#include "fieldguard/ranging.hpp"
#include "fieldguard/scheduler.hpp"

namespace fieldguard::sim {
namespace {

using nlohmann::json;

constexpr double kEntrySampleS = 0.01;
constexpr double kEntryResolutionS = 1e-9;
constexpr std::pair<double, double> kDefaultAnimalBoxPx{48.0, 36.0};

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

Vec2 position_at(const AnimalAgent& agent, double t) {
    return agent.start + (t - agent.entry_time_s) * agent.velocity;
}

bool visible_to_any(const FieldLayout& layout, Vec2 p) {
    return std::any_of(layout.cameras.begin(), layout.cameras.end(), [&](const FieldCamera& c) {
        return in_field_of_view(c.pose, c.intrinsics, p);
    });
}

std::pair<double, double> animal_box(const Scenario& s, const std::string& species) {
    const auto it = s.animal_box_px.find(species);
    return it == s.animal_box_px.end() ? kDefaultAnimalBoxPx : it->second;
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        fail(where + ": '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    return obj.contains(key) ? get_as<T>(obj, key, where) : fallback;
}

Vec2 get_vec2(const json& obj, const char* key, const std::string& where) {
    const auto v = get_as<std::vector<double>>(obj, key, where);
    if (v.size() != 2) fail(where + ": '" + key + "' must be a two-element array");
    return {v[0], v[1]};
}

}  // namespace

bool FieldLayout::contains(Vec2 p) const {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
}

void validate(const FieldLayout& layout) {
    if (!(layout.width_m > 0.0) || !(layout.height_m > 0.0)) {
        fail("field width and height must be positive");
    }
    if (layout.cameras.empty()) {
        fail("field layout needs at least one camera");
    }
    if (layout.cameras.size() > kMaxCameras) {
        fail("field layout has more than " + std::to_string(kMaxCameras) + " cameras");
    }
    std::set<std::uint32_t> ids;
    for (const auto& s : layout.speakers) {
        if (!layout.contains(s.position)) {
            fail("speaker " + std::to_string(s.id) + " lies outside the field");
        }
        if (!ids.insert(s.id).second) {
            fail("duplicate speaker id " + std::to_string(s.id));
        }
    }
}

FieldLayout make_corner_layout(double width_m, double height_m, const CameraIntrinsics& prototype,
                               std::size_t speaker_count, double angle_of_view_rad) {
    FieldLayout layout;
    layout.width_m = width_m;
    layout.height_m = height_m;
    const std::array<std::pair<Vec2, Vec2>, 4> corners{{
        {{0.0, 0.0}, {1.0, 1.0}},
        {{width_m, 0.0}, {-1.0, 1.0}},
        {{width_m, height_m}, {-1.0, -1.0}},
        {{0.0, height_m}, {1.0, -1.0}},
    }};
    for (std::size_t i = 0; i < corners.size(); ++i) {
        CameraIntrinsics intr(prototype.camera_id() + std::to_string(i + 1), prototype.focal_length_mm(),
                              prototype.pixel_pitch_um(), prototype.range_m(), prototype.image_width(),
                              prototype.image_height());
        layout.cameras.push_back(
            FieldCamera{std::move(intr), CameraPose(corners[i].first, corners[i].second, angle_of_view_rad)});
    }
    const double spacing = width_m / static_cast<double>(speaker_count + 1);
    for (std::size_t i = 0; i < speaker_count; ++i) {
        layout.speakers.push_back(
            SpeakerSite{static_cast<std::uint32_t>(i + 1), {spacing * static_cast<double>(i + 1), 0.5 * height_m}});
    }
    validate(layout);
    return layout;
}

SpeciesTable SpeciesTable::defaults() {
    SpeciesTable t;
    t.set("bear", 1.7);
    return t;
}

void SpeciesTable::set(std::string species, double speed_mps) {
    if (!std::isfinite(speed_mps) || speed_mps <= 0.0) {
        fail("speed for '" + species + "' must be positive");
    }
    speeds_[std::move(species)] = speed_mps;
}

double SpeciesTable::speed(const std::string& species) const {
    const auto it = speeds_.find(species);
    if (it == speeds_.end()) {
        fail("no walking speed configured for species '" + species + "'");
    }
    return it->second;
}

AnimalAgent make_agent(std::string species, Vec2 start, Vec2 heading, double entry_time_s,
                       const SpeciesTable& table) {
    const double n = norm(heading);
    if (!std::isfinite(n) || n == 0.0) {
        fail("agent heading must be a non-zero vector");
    }
    const double speed = table.speed(species);
    return AnimalAgent{std::move(species), start, (speed / n) * heading, entry_time_s};
}

double NoiseModel::nominal() const {
    switch (kind) {
        case Kind::none:
            return 1.0;
        case Kind::fixed:
            return factor;
        case Kind::uniform:
            return 0.5 * (low + high);
    }
    return 1.0;
}

void validate(const Scenario& scenario) {
    validate(scenario.layout);
    if (!(scenario.tick_s > 0.0)) {
        fail("tick_s must be positive");
    }
    if (scenario.tick_s > kMaxFrameIntervalS) {
        fail("tick_s exceeds the 1.5 s frame interval bound");
    }
    if (!(scenario.duration_s >= scenario.tick_s)) {
        fail("duration_s must be at least one tick");
    }
    for (const auto& a : scenario.agents) {
        const double expected = scenario.species.speed(a.species);
        if (std::abs(norm(a.velocity) - expected) > 1e-9 * std::max(1.0, expected)) {
            fail("agent of species '" + a.species + "' does not move at the species speed");
        }
    }
    const auto& n = scenario.noise;
    if (n.kind == NoiseModel::Kind::fixed && !(n.factor > 0.0)) {
        fail("fixed noise factor must be positive");
    }
    if (n.kind == NoiseModel::Kind::uniform && !(n.low > 0.0 && n.high >= n.low)) {
        fail("uniform noise needs 0 < low <= high");
    }
}

SimState initial_state(const Scenario& scenario) {
    SimState s;
    for (const auto& a : scenario.agents) {
        const bool active = a.entry_time_s <= 0.0;
        s.agents.push_back(AgentState{a, active ? position_at(a, 0.0) : a.start, active});
    }
    return s;
}

SimState step(const SimState& state, double dt_s) {
    if (!std::isfinite(dt_s) || dt_s <= 0.0) {
        throw DomainError("time step must be positive");
    }
    SimState next = state;
    next.time_s = state.time_s + dt_s;
    for (auto& a : next.agents) {
        if (a.active) {
            a.position = a.position + dt_s * a.agent.velocity;
        } else if (a.agent.entry_time_s <= next.time_s) {
            a.active = true;
            a.position = a.agent.start + (next.time_s - a.agent.entry_time_s) * a.agent.velocity;
        }
    }
    return next;
}

Vec2 world_to_image(const FieldCamera& camera, Vec2 world, double noise_factor) {
    const RangingModel model(camera.intrinsics);
    const double px_per_m = pixel_distance_for(model, 1.0);
    const Vec2 b = camera.pose.boresight();
    const Vec2 right{b.y, -b.x};
    const Vec2 rel = noise_factor * (world - camera.pose.position());
    const double forward = dot(rel, b);
    const double lateral = dot(rel, right);
    return {0.5 * camera.intrinsics.image_width() + px_per_m * lateral,
            0.5 * camera.intrinsics.image_height() -
                px_per_m * (forward - 0.5 * camera.intrinsics.range_m())};
}

DetectionFrame synthesize_frame(const Scenario& scenario, const SimState& state,
                                std::size_t camera_index, std::uint64_t frame_index,
                                double noise_factor) {
    const FieldCamera& cam = scenario.layout.cameras.at(camera_index);
    DetectionFrame frame;
    frame.camera_id = cam.intrinsics.camera_id();
    frame.frame_index = frame_index;
    frame.timestamp_ms = scenario.start_timestamp_ms + std::llround(state.time_s * 1000.0);

    std::vector<SpeakerSite> speakers = scenario.layout.speakers;
    std::sort(speakers.begin(), speakers.end(),
              [](const SpeakerSite& a, const SpeakerSite& b) { return a.id < b.id; });
    for (const auto& s : speakers) {
        if (!in_field_of_view(cam.pose, cam.intrinsics, s.position)) continue;
        const Vec2 px = world_to_image(cam, s.position, noise_factor);
        frame.detections.emplace_back(BBox(px.x, px.y, scenario.speaker_box_px, scenario.speaker_box_px),
                                      "speaker", 1.0);
    }
    for (const auto& a : state.agents) {
        if (!a.active || !in_field_of_view(cam.pose, cam.intrinsics, a.position)) continue;
        const Vec2 px = world_to_image(cam, a.position, noise_factor);
        const auto [w, h] = animal_box(scenario, a.agent.species);
        frame.detections.emplace_back(BBox(px.x, px.y, w, h), a.agent.species, 1.0);
    }
    return frame;
}

SystemConfig engine_config_for(const Scenario& scenario) {
    SystemConfig config;
    for (const auto& c : scenario.layout.cameras) {
        config.cameras.push_back(CameraConfig{c.intrinsics, c.pose});
    }
    std::set<std::string> threats = config.policy.threat_classes();
    for (const auto& a : scenario.agents) threats.insert(a.species);
    config.policy = ThreatPolicy(std::move(threats), config.policy.speaker_class());
    const double nominal = scenario.noise.nominal();
    for (const auto& c : scenario.layout.cameras) {
        for (const auto& s : scenario.layout.speakers) {
            if (!in_field_of_view(c.pose, c.intrinsics, s.position)) continue;
            config.speakers.push_back(SpeakerConfig{s.id, s.position, c.intrinsics.camera_id(),
                                                    world_to_image(c, s.position, nominal)});
        }
    }
    config.frame_interval_s = scenario.tick_s;
    validate(config);
    return config;
}

std::optional<double> fov_entry_time(const FieldLayout& layout, const AnimalAgent& agent,
                                     double horizon_s) {
    double prev = agent.entry_time_s;
    if (visible_to_any(layout, position_at(agent, prev))) {
        return prev;
    }
    for (double t = prev + kEntrySampleS; prev < horizon_s; t += kEntrySampleS) {
        const double now = std::min(t, horizon_s);
        if (visible_to_any(layout, position_at(agent, now))) {
            double lo = prev;
            double hi = now;
            while (hi - lo > kEntryResolutionS) {
                const double mid = 0.5 * (lo + hi);
                (visible_to_any(layout, position_at(agent, mid)) ? hi : lo) = mid;
            }
            return hi;
        }
        prev = now;
    }
    return std::nullopt;
}

nlohmann::json metrics_to_json(const ScenarioMetrics& m) {
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json agents = json::array();
    for (const auto& a : m.agents) {
        agents.push_back({{"fov_entry_s", opt(a.fov_entry_s)}, {"first_command_s", opt(a.first_command_s)}});
    }
    return {{"first_detection_s", opt(m.first_detection_s)},
            {"first_command_s", opt(m.first_command_s)},
            {"selected_speaker_ids", m.selected_speaker_ids},
            {"commands", m.commands},
            {"correct_commands", m.correct_commands},
            {"alerts", m.alerts},
            {"correct_speaker_rate", m.correct_speaker_rate},
            {"worst_case_lag_s", opt(m.worst_case_lag_s)},
            {"missed_agents", m.missed_agents},
            {"agents", agents}};
}

ScenarioRun run_scenario(const Scenario& scenario, EventLog& log) {
    validate(scenario);
    Engine engine(engine_config_for(scenario), log, ClockMode::replay);
    const FieldLayout& layout = scenario.layout;

    std::vector<std::string> ids;
    for (const auto& c : layout.cameras) ids.push_back(c.intrinsics.camera_id());

    std::mt19937_64 rng(scenario.seed);
    std::uniform_real_distribution<double> uniform(scenario.noise.low, scenario.noise.high);
    const auto draw_noise = [&]() -> double {
        switch (scenario.noise.kind) {
            case NoiseModel::Kind::none:
                return 1.0;
            case NoiseModel::Kind::fixed:
                return scenario.noise.factor;
            case NoiseModel::Kind::uniform:
                return uniform(rng);
        }
        return 1.0;
    };

    ScenarioRun run;
    ScenarioMetrics& m = run.metrics;
    for (const auto& a : scenario.agents) {
        m.agents.push_back(AgentTiming{fov_entry_time(layout, a, scenario.duration_s), std::nullopt});
    }

    const auto ticks = static_cast<std::uint64_t>(std::floor(scenario.duration_s / scenario.tick_s + 1e-9));
    SimState state = initial_state(scenario);
    for (std::uint64_t k = 0; k <= ticks; ++k) {
        const double t = state.time_s;
        for (const std::string& cam_id : round_robin_schedule(ids, ids.size())) {
            const std::size_t ci =
                static_cast<std::size_t>(std::find(ids.begin(), ids.end(), cam_id) - ids.begin());
            const FieldCamera& cam = layout.cameras[ci];
            const double noise = draw_noise();
            DetectionFrame frame = synthesize_frame(scenario, state, ci, k, noise);
            const FrameOutcome out = engine.handle(frame);
            run.stream.push_back(std::move(frame));

            if (!out.threats.empty() && !m.first_detection_s) m.first_detection_s = t;
            m.alerts += out.alerts.size();

            std::vector<const SpeakerSite*> visible_speakers;
            for (const auto& s : layout.speakers) {
                if (in_field_of_view(cam.pose, cam.intrinsics, s.position)) visible_speakers.push_back(&s);
            }

            for (const auto& cmd : out.commands) {
                ++m.commands;
                if (!m.first_command_s) m.first_command_s = t;

                // Which agent raised this command: nearest active agent in image space.
                std::optional<std::size_t> agent_idx;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < state.agents.size(); ++i) {
                    const auto& a = state.agents[i];
                    if (!a.active || a.agent.species != cmd.animal_class) continue;
                    const Vec2 px = world_to_image(cam, a.position, noise);
                    const double d = std::hypot(px.x - cmd.animal_bbox.cx(), px.y - cmd.animal_bbox.cy());
                    if (d < best) {
                        best = d;
                        agent_idx = i;
                    }
                }

                // Which world speaker the engine's track points at.
                const auto& tracks = engine.registry(cam_id).tracks();
                const auto track = std::find_if(tracks.begin(), tracks.end(), [&](const SpeakerTrack& tr) {
                    return tr.speaker_id == cmd.speaker_id;
                });
                std::optional<std::uint32_t> named;
                best = std::numeric_limits<double>::infinity();
                for (const SpeakerSite* s : visible_speakers) {
                    const Vec2 px = world_to_image(cam, s->position, noise);
                    const double d = std::hypot(px.x - track->last_bbox.cx(), px.y - track->last_bbox.cy());
                    if (d < best) {
                        best = d;
                        named = s->id;
                    }
                }
                m.selected_speaker_ids.push_back(named.value_or(cmd.speaker_id));

                if (!agent_idx) continue;
                if (!m.agents[*agent_idx].first_command_s) m.agents[*agent_idx].first_command_s = t;

                std::optional<std::uint32_t> truth;
                double truth_d = std::numeric_limits<double>::infinity();
                for (const SpeakerSite* s : visible_speakers) {
                    const double d = distance(s->position, state.agents[*agent_idx].position);
                    if (d < truth_d || (d == truth_d && s->id < *truth)) {
                        truth_d = d;
                        truth = s->id;
                    }
                }
                if (truth && named && *truth == *named) ++m.correct_commands;
            }
        }
        if (k < ticks) state = step(state, scenario.tick_s);
    }

    if (m.commands > 0) {
        m.correct_speaker_rate = static_cast<double>(m.correct_commands) / static_cast<double>(m.commands);
    }
    for (const auto& a : m.agents) {
        if (!a.fov_entry_s) continue;
        if (!a.first_command_s) {
            ++m.missed_agents;
            continue;
        }
        const double lag = *a.first_command_s - *a.fov_entry_s;
        m.worst_case_lag_s = m.worst_case_lag_s ? std::max(*m.worst_case_lag_s, lag) : lag;
    }
    return run;
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) fail("scenario: top level must be an object");
    Scenario s;

    if (!doc.contains("field")) fail("scenario: missing 'field'");
    const json& f = doc.at("field");
    const double width = get_as<double>(f, "width_m", "field");
    const double height = get_as<double>(f, "height_m", "field");

    if (!doc.contains("camera")) fail("scenario: missing 'camera'");
    const json& c = doc.at("camera");
    std::optional<FieldLayout> layout;
    try {
        const CameraIntrinsics proto(get_or<std::string>(c, "camera_id_prefix", "c", "camera"),
                                     get_as<double>(c, "focal_length_mm", "camera"),
                                     get_as<double>(c, "pixel_pitch_um", "camera"),
                                     get_as<double>(c, "range_m", "camera"),
                                     get_as<int>(c, "image_width", "camera"),
                                     get_as<int>(c, "image_height", "camera"));
        const double aov = degrees_to_radians(get_or<double>(c, "angle_of_view_deg", 90.0, "camera"));

        std::size_t count = 0;
        std::vector<SpeakerSite> explicit_speakers;
        if (doc.contains("speakers")) {
            const json& sp = doc.at("speakers");
            if (sp.is_object()) {
                count = get_as<std::size_t>(sp, "count", "speakers");
            } else if (sp.is_array()) {
                for (std::size_t i = 0; i < sp.size(); ++i) {
                    const std::string where = "speakers[" + std::to_string(i) + "]";
                    explicit_speakers.push_back(SpeakerSite{get_as<std::uint32_t>(sp[i], "id", where),
                                                            get_vec2(sp[i], "position", where)});
                }
            } else {
                fail("scenario: 'speakers' must be an object with 'count' or an array");
            }
        }
        layout = make_corner_layout(width, height, proto, count, aov);
        if (!explicit_speakers.empty()) {
            layout->speakers = std::move(explicit_speakers);
            validate(*layout);
        }
    } catch (const DomainError& e) {
        fail(std::string("scenario camera: ") + e.what());
    }
    s.layout = std::move(*layout);

    if (doc.contains("species")) {
        for (const auto& [name, speed] : doc.at("species").items()) {
            if (!speed.is_number()) fail("species '" + name + "': speed must be a number");
            s.species.set(name, speed.get<double>());
        }
    }
    if (doc.contains("animal_box_px")) {
        for (const auto& [name, box] : doc.at("animal_box_px").items()) {
            const auto wh = box.get<std::vector<double>>();
            if (wh.size() != 2 || !(wh[0] > 0.0) || !(wh[1] > 0.0)) {
                fail("animal_box_px '" + name + "' must be [w, h] with positive values");
            }
            s.animal_box_px[name] = {wh[0], wh[1]};
        }
    }
    if (doc.contains("agents")) {
        const json& agents = doc.at("agents");
        if (!agents.is_array()) fail("scenario: 'agents' must be an array");
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const std::string where = "agents[" + std::to_string(i) + "]";
            s.agents.push_back(make_agent(get_as<std::string>(agents[i], "species", where),
                                          get_vec2(agents[i], "start", where),
                                          get_vec2(agents[i], "heading", where),
                                          get_or<double>(agents[i], "entry_time_s", 0.0, where), s.species));
        }
    }
    s.duration_s = get_or<double>(doc, "duration_s", s.duration_s, "scenario");
    s.tick_s = get_or<double>(doc, "tick_s", s.tick_s, "scenario");
    s.seed = get_or<std::uint64_t>(doc, "seed", s.seed, "scenario");
    s.start_timestamp_ms = get_or<std::int64_t>(doc, "start_timestamp_ms", s.start_timestamp_ms, "scenario");
    s.speaker_box_px = get_or<double>(doc, "speaker_box_px", s.speaker_box_px, "scenario");
    if (doc.contains("noise")) {
        const json& n = doc.at("noise");
        const auto kind = get_as<std::string>(n, "kind", "noise");
        if (kind == "none") {
            s.noise.kind = NoiseModel::Kind::none;
        } else if (kind == "fixed") {
            s.noise.kind = NoiseModel::Kind::fixed;
            s.noise.factor = get_as<double>(n, "factor", "noise");
        } else if (kind == "uniform") {
            s.noise.kind = NoiseModel::Kind::uniform;
            s.noise.low = get_as<double>(n, "low", "noise");
            s.noise.high = get_as<double>(n, "high", "noise");
        } else {
            fail("noise: unknown kind '" + kind + "'");
        }
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("scenario " + path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

}  // namespace fieldguard::sim
