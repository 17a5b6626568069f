// seamloc command-line front end.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seamloc/error.hpp"
#include "seamloc/evaluation.hpp"
#include "seamloc/io.hpp"

using namespace seamloc;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

io::AppConfig config_of(const Globals& g) {
  return g.config.empty() ? io::AppConfig{} : io::load_config(g.config);
}

fs::path out_dir(const Globals& g) {
  if (g.out.empty()) fail(ErrorCategory::kInvalidInput, "--out <dir> is required");
  fs::create_directories(g.out);
  return g.out;
}

std::string trial_name(std::size_t i) {
  std::string n = std::to_string(i);
  return "trial_" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n;
}

void write_sim(const fs::path& dir, const SimResult& sim) {
  fs::create_directories(dir);
  io::save_trace(dir / "trace.csv", sim.trace);
  io::save_truth(dir / "truth.json", sim.truth);
}

TrackConfig track_config(const io::AppConfig& cfg, std::uint64_t seed) {
  TrackConfig t = cfg.track;
  t.seed = seed;
  return t;
}

// Exit status per error category; 1 is left for unexpected failures and
// CLI11 uses its own codes for usage errors.
int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kInvalidParameter: return 10;
    case ErrorCategory::kInvalidInput: return 11;
    case ErrorCategory::kInvalidScript: return 12;
    case ErrorCategory::kParse: return 13;
    case ErrorCategory::kInvariantViolation: return 14;
    case ErrorCategory::kFilterDivergence: return 15;
    case ErrorCategory::kStateInconsistency: return 16;
    case ErrorCategory::kIo: return 17;
  }
  return 1;
}

EvalReport evaluate_dirs(const fs::path& tracks, const fs::path& truths, const EvalConfig& cfg) {
  std::vector<std::string> names;
  if (!fs::is_directory(truths)) fail(ErrorCategory::kIo, truths.string() + " is not a directory");
  for (const auto& entry : fs::directory_iterator(truths)) {
    if (entry.is_directory() && fs::exists(entry.path() / "truth.json")) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  // A single trial may be given directly.
  if (names.empty() && fs::exists(truths / "truth.json")) names.push_back(".");

  std::vector<TrialResult> trials;
  for (const std::string& name : names) {
    TrialResult t;
    t.truth = io::load_truth(truths / name / "truth.json");
    t.switches = io::load_switches(tracks / name / "events.csv");
    t.final_estimate = io::load_final_position(tracks / name / "path.csv");
    trials.push_back(std::move(t));
  }
  return evaluate(trials, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seamloc: offline indoor/outdoor seamless localization"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output directory");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthesize IMU traces with ground truth");
  std::string sim_plan, sim_script, sim_route = "crossing", sim_noise = "calibrated";
  std::size_t sim_trials = 0;
  sim->add_option("--plan", sim_plan, "Floor plan JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--script", sim_script, "Walk script JSON (default: a route of the plan)")
      ->check(CLI::ExistingFile);
  sim->add_option("--route", sim_route, "Plan route to walk when no script is given");
  sim->add_option("--noise", sim_noise, "none, calibrated, or a noise JSON file");
  sim->add_option("--trials", sim_trials, "Generate a scenario suite of N trials instead");

  // track
  auto* trk = app.add_subcommand("track", "Track a trace through a floor plan");
  std::string trk_trace, trk_plan;
  trk->add_option("--trace", trk_trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  trk->add_option("--plan", trk_plan, "Floor plan JSON")->required()->check(CLI::ExistingFile);

  // locate
  auto* loc = app.add_subcommand("locate", "Fingerprint position estimate");
  std::string loc_map, loc_obs;
  loc->add_option("--radiomap", loc_map, "Radio map JSON")->required()->check(CLI::ExistingFile);
  loc->add_option("--obs", loc_obs, "Observation JSON")->required()->check(CLI::ExistingFile);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate tracked trials against ground truth");
  std::string ev_tracks, ev_truth;
  ev->add_option("--tracks", ev_tracks, "Directory of per-trial track outputs")->required();
  ev->add_option("--truth", ev_truth, "Directory of per-trial truth.json (default: --tracks)");

  // report
  auto* rep = app.add_subcommand("report", "Simulate, track and evaluate a scenario suite");
  std::string rep_plan, rep_noise = "calibrated";
  std::size_t rep_trials = 50;
  std::optional<double> rep_turnback;
  bool rep_keep = false;
  rep->add_option("--plan", rep_plan, "Floor plan JSON")->required()->check(CLI::ExistingFile);
  rep->add_option("--trials", rep_trials, "Number of trials");
  rep->add_option("--noise", rep_noise, "none, calibrated, or a noise JSON file");
  rep->add_option("--turnback-fraction", rep_turnback, "Share of turn-back trials")->check(CLI::Range(0.0, 1.0));
  rep->add_flag("--keep-trials", rep_keep, "Also write every trial's trace, truth and track");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const io::AppConfig cfg = config_of(g);

    if (*sim) {
      const FloorPlan plan = io::load_floorplan(sim_plan);
      const NoiseModel noise = io::load_noise(sim_noise, g.seed);
      const fs::path dir = out_dir(g);
      if (sim_trials > 0) {
        const auto results = scenario_suite(plan, sim_trials, noise, cfg.suite);
        for (std::size_t i = 0; i < results.size(); ++i) write_sim(dir / trial_name(i), results[i]);
        std::cout << "wrote " << results.size() << " trials to " << dir.string() << '\n';
      } else {
        WalkScript script =
            sim_script.empty() ? script_from_route(plan, sim_route) : io::load_walk_script(sim_script, plan);
        if (sim_script.empty()) {
          script.cadence = cfg.suite.cadence;
          script.step_length_true = cfg.suite.step_length_true;
        }
        const SimResult r = generate_walk(script, noise, cfg.suite.sample_rate);
        write_sim(dir, r);
        std::cout << "wrote " << r.trace.size() << " samples, " << r.truth.step_count() << " steps to "
                  << dir.string() << '\n';
      }
    } else if (*trk) {
      const FloorPlan plan = io::load_floorplan(trk_plan);
      const Trace trace = io::load_trace(trk_trace);
      const TrackResult r = track(trace, plan, track_config(cfg, g.seed));
      const fs::path dir = out_dir(g);
      io::save_track_result(dir, r);
      std::cout << r.path.size() << " steps, " << r.events.switches().size() << " switches\n";
    } else if (*loc) {
      const RadioMap map = io::load_radiomap(loc_map);
      const Point2 p = estimate_position(io::load_observation(loc_obs), map, cfg.wknn);
      const std::string line = io::format_double(p.x) + "," + io::format_double(p.y) + "\n";
      std::cout << line;
      if (!g.out.empty()) io::write_file(out_dir(g) / "position.csv", "x,y\n" + line);
    } else if (*ev) {
      const EvalReport r = evaluate_dirs(ev_tracks, ev_truth.empty() ? ev_tracks : ev_truth, cfg.eval);
      io::save_report(out_dir(g), r);
      std::cout << io::format_report(r);
    } else if (*rep) {
      const FloorPlan plan = io::load_floorplan(rep_plan);
      const NoiseModel noise = io::load_noise(rep_noise, g.seed);
      SuiteOptions options = cfg.suite;
      if (rep_turnback) options.turnback_fraction = *rep_turnback;
      const fs::path dir = out_dir(g);
      const auto sims = scenario_suite(plan, rep_trials, noise, options);
      std::vector<TrialResult> trials;
      for (std::size_t i = 0; i < sims.size(); ++i) {
        const TrackResult tr = track(sims[i].trace, plan, track_config(cfg, trial_seed(g.seed, i)));
        if (rep_keep) {
          write_sim(dir / trial_name(i), sims[i]);
          io::save_track_result(dir / trial_name(i), tr);
        }
        TrialResult t;
        t.switches = tr.events.switches();
        if (!tr.path.empty()) t.final_estimate = tr.path.back().position;
        t.truth = sims[i].truth;
        trials.push_back(std::move(t));
      }
      const EvalReport r = evaluate(trials, cfg.eval);
      io::save_report(dir, r);
      std::cout << io::format_report(r);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.category()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
