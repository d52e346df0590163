// fieldguard: crop-field deterrence engine, replay, calibration, error
// analysis and field simulation from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fieldguard/config.hpp"
#include "fieldguard/engine.hpp"
#include "fieldguard/error_table.hpp"
#include "fieldguard/errors.hpp"
#include "fieldguard/event_log.hpp"
#include "fieldguard/ingest.hpp"
#include "fieldguard/optics.hpp"
#include "fieldguard/ranging.hpp"
#include "fieldguard/simulator.hpp"
#include "fieldguard/wire.hpp"

namespace fg = fieldguard;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;

void print_stats(const fg::RunStats& stats) {
    std::cout << "frames: " << stats.frames << "\ncommands: " << stats.commands
              << "\nalerts: " << stats.alerts << "\n";
}

fg::SystemConfig load_and_warn(const std::string& path) {
    fg::SystemConfig config = fg::load_config(path);
    for (const auto& w : fg::placement_warnings(config)) {
        std::cerr << "warning: " << w << "\n";
    }
    return config;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crop field surveillance: detection streams in, speaker commands out"};
    app.require_subcommand(1);

    std::string config_path;
    std::string input = "-";
    std::string log_override;
    std::size_t connections = 0;

    auto* run = app.add_subcommand("run", "Live engine over stdin, a file or a TCP listener");
    run->add_option("--config", config_path, "System config (JSON)")->required();
    run->add_option("--input", input, "Path, '-' for stdin, or tcp:host:port");
    run->add_option("--log", log_override, "Event log path (overrides config)");
    run->add_option("--connections", connections, "Stop after this many TCP streams (0 = never)");

    auto* replay = app.add_subcommand("replay", "Deterministic replay of a recorded detection stream");
    replay->add_option("--config", config_path, "System config (JSON)")->required();
    replay->add_option("--input", input, "Recorded detection stream (JSON lines)")->required();
    replay->add_option("--log", log_override, "Event log path (overrides config)");

    double focal_mm = 0.0, pitch_um = 0.0, range_m = 0.0;
    std::optional<double> d_m, p_m;
    std::optional<int> width_px;
    auto* calibrate = app.add_subcommand("calibrate", "Print IFOV, meters per pixel and angle of view");
    calibrate->add_option("--focal-mm", focal_mm, "Focal length in millimeters")->required();
    calibrate->add_option("--pitch-um", pitch_um, "Sensor pixel pitch in micrometers")->required();
    calibrate->add_option("--range-m", range_m, "Calibrated range in meters")->required();
    auto* d_opt = calibrate->add_option("--d-m", d_m, "Half-width D of the view at distance P");
    auto* p_opt = calibrate->add_option("--p-m", p_m, "Perpendicular distance P");
    d_opt->needs(p_opt);
    p_opt->needs(d_opt);
    calibrate->add_option("--width-px", width_px, "Sensor width in pixels (angle of view from the sensor)");

    std::string csv_path;
    auto* analyze = app.add_subcommand("analyze", "Percent-error table for measured vs true distances");
    analyze->add_option("--csv", csv_path, "CSV of label,obtained,actual")->required();

    std::string scenario_path, stream_path;
    std::optional<std::uint64_t> seed;
    std::string sim_log = "events.jsonl";
    auto* simulate = app.add_subcommand("simulate", "Run a field scenario through the engine");
    simulate->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    simulate->add_option("--seed", seed, "Override the scenario seed");
    simulate->add_option("--log", sim_log, "Event log path");
    simulate->add_option("--stream", stream_path, "Also write the synthesized detection stream here");

    bool print_default = false;
    auto* config_cmd = app.add_subcommand("config", "Configuration helpers");
    config_cmd->add_flag("--print-default", print_default, "Print a config with every default spelled out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            fg::SystemConfig config = load_and_warn(config_path);
            const auto path = log_override.empty() ? config.log_path : std::filesystem::path(log_override);
            fg::EventLog log(path, fg::EventLog::OpenMode::append);
            const fg::InputSpec spec = fg::parse_input_spec(input);
            print_stats(fg::run_live(config, spec, log, connections, [&](std::uint16_t port) {
                std::cerr << "listening on " << spec.host << ":" << port << std::endl;
            }));
        } else if (replay->parsed()) {
            fg::SystemConfig config = load_and_warn(config_path);
            std::ifstream in(input);
            if (!in) throw fg::ProtocolError("cannot open input " + input, 0);
            const auto path = log_override.empty() ? config.log_path : std::filesystem::path(log_override);
            fg::EventLog log(path, fg::EventLog::OpenMode::truncate);
            print_stats(fg::replay_stream(config, in, log));
        } else if (calibrate->parsed()) {
            const fg::CameraIntrinsics intr("calibrate", focal_mm, pitch_um, range_m, width_px.value_or(1), 1);
            const fg::RangingModel model(intr);
            std::cout << "ifov_rad_per_px: " << fmt("%.6e", model.ifov()) << "\n"
                      << "meters_per_px: " << fmt("%.6g", model.meters_per_pixel()) << "\n";
            if (d_m) {
                const double aov = fg::angle_of_view(*d_m, *p_m);
                std::cout << "angle_of_view_rad: " << fmt("%.6f", aov) << "\n"
                          << "angle_of_view_deg: " << fmt("%.4f", fg::radians_to_degrees(aov)) << "\n"
                          << "view_width_m: " << fmt("%.6g", 2.0 * *d_m) << "\n";
            }
            if (width_px) {
                const double aov = fg::sensor_angle_of_view(intr);
                std::cout << "sensor_angle_of_view_deg: " << fmt("%.4f", fg::radians_to_degrees(aov)) << "\n";
            }
        } else if (analyze->parsed()) {
            const auto records = fg::read_error_csv(std::filesystem::path(csv_path));
            std::cout << fg::format_error_report(records, fg::summarize_errors(records));
        } else if (simulate->parsed()) {
            fg::sim::Scenario scenario = fg::sim::load_scenario(scenario_path);
            if (seed) scenario.seed = *seed;
            fg::EventLog log(sim_log, fg::EventLog::OpenMode::truncate);
            const fg::sim::ScenarioRun result = fg::sim::run_scenario(scenario, log);
            if (!stream_path.empty()) {
                std::ofstream out(stream_path, std::ios::trunc);
                for (const auto& f : result.stream) out << fg::serialize_frame(f) << "\n";
                if (!out) throw fg::LogError("cannot write stream " + stream_path);
            }
            std::cout << fg::sim::metrics_to_json(result.metrics).dump(2) << "\n";
        } else if (config_cmd->parsed()) {
            if (!print_default) {
                std::cerr << "nothing to do; try --print-default\n";
                return kExitConfig;
            }
            std::cout << fg::config_to_json(fg::default_config()).dump(2) << "\n";
        }
    } catch (const fg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fg::SequencingError& e) {
        std::cerr << "sequencing error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fg::ProtocolError& e) {
        std::cerr << "input error: " << e.what() << " (byte " << e.byte_offset() << ")\n";
        return kExitInput;
    } catch (const fg::DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
