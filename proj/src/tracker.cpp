#include "seamloc/tracker.hpp"

#include <algorithm>

#include "seamloc/sim.hpp"

namespace seamloc {

std::string_view to_string(ActiveFilter filter) {
  return filter == ActiveFilter::kParticle ? "PF" : "KF";
}

void TrackConfig::validate() const {
  signal.validate();
  pdr.validate();
  pf.validate();
  kf.validate();
  crossing.validate();
}

std::vector<SwitchEvent> EventLog::switches() const {
  std::vector<SwitchEvent> out;
  for (const LogEntry& e : entries) {
    if (const auto* sw = std::get_if<SwitchEvent>(&e.payload)) out.push_back(*sw);
  }
  return out;
}

std::size_t EventLog::count_steps() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const LogEntry& e) {
    return std::holds_alternative<StepEvent>(e.payload);
  }));
}

std::size_t EventLog::count_door_opens() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const LogEntry& e) {
    return std::holds_alternative<DoorOpenRecord>(e.payload);
  }));
}

namespace {

std::uint64_t filter_seed(const TrackConfig& cfg, std::size_t step_index, std::uint64_t salt) {
  return trial_seed(cfg.seed ^ salt, step_index);
}

ActiveFilter filter_for(Environment env) {
  return env == Environment::kIndoor ? ActiveFilter::kParticle : ActiveFilter::kKalman;
}

}  // namespace

TrackerState initial_tracker_state(const FloorPlan& plan, const TrackConfig& cfg) {
  TrackerState state;
  state.pose = {plan.initial_pose.position, wrap_angle(plan.initial_pose.heading)};
  state.environment = plan.initial_environment;
  state.active_filter = filter_for(state.environment);
  state.crossing.environment = state.environment;
  if (state.active_filter == ActiveFilter::kParticle) {
    state.particles = pf_init(state.pose, cfg.pf, filter_seed(cfg, 0, 0));
  } else {
    state.kalman = kf_seed(state.pose.heading, cfg.kf);
  }
  return state;
}

TrackerState on_switch(TrackerState tracker, const SwitchEvent& ev, const TrackConfig& cfg) {
  if (ev.from_env != tracker.environment) {
    fail(ErrorCategory::kStateInconsistency,
         "switch from " + std::string(to_string(ev.from_env)) + " while tracker is " +
             std::string(to_string(tracker.environment)));
  }
  tracker.environment = ev.to_env;
  tracker.crossing.environment = ev.to_env;
  tracker.active_filter = filter_for(ev.to_env);
  if (tracker.active_filter == ActiveFilter::kParticle) {
    if (tracker.kalman) tracker.pose.heading = tracker.kalman->heading;
    tracker.kalman.reset();
    tracker.pose.position = ev.crossing_point;
    tracker.particles = pf_init(tracker.pose, cfg.pf, filter_seed(cfg, ev.step_index, 1));
  } else {
    tracker.particles.reset();
    tracker.kalman = kf_seed(tracker.pose.heading, cfg.kf);
  }
  return tracker;
}

TrackResult track(const Trace& trace, const FloorPlan& plan, const TrackConfig& cfg) {
  TrackResult result;
  if (trace.empty()) return result;
  trace.validate();
  cfg.validate();

  const std::vector<SignalPoint> series = normalized_series(trace, cfg.signal);
  const std::vector<StepEvent> steps = detect_steps(series, cfg.signal);
  const std::vector<DoorOpenEvent> openings = detect_door_openings(series, cfg.signal, steps);
  const ZoneIndex zones(plan.doors, cfg.crossing.zone_width);

  // Each opening is reported at the first step after it ends.
  std::vector<DoorOpenRecord> records;
  for (const DoorOpenEvent& o : openings) {
    const auto it = std::find_if(steps.begin(), steps.end(),
                                 [&](const StepEvent& s) { return s.t >= o.t_end; });
    records.push_back({o, static_cast<std::size_t>(it - steps.begin())});
  }

  PdrConfig pdr = cfg.pdr;
  TrackerState state = initial_tracker_state(plan, cfg);
  pdr.initial_pose = state.pose;

  const int yaw = static_cast<int>(pdr.yaw_axis);
  std::size_t cursor = 0;
  std::size_t next_record = 0;
  double last_t = trace.samples.front().t;
  double last_rate = trace.samples.front().gyro[yaw];
  if (state.kalman) {
    if (const auto m = mag_heading(trace.samples.front(), cfg.kf)) {
      state.kalman = kf_update(*state.kalman, *m, cfg.kf);
    }
  }
  cursor = 1;

  auto advance_to = [&](double t) {
    for (; cursor < trace.size() && trace.samples[cursor].t <= t; ++cursor) {
      const ImuSample& s = trace.samples[cursor];
      const double rate = 0.5 * (last_rate + s.gyro[yaw]);
      const double dt = s.t - last_t;
      if (state.kalman) {
        state.kalman = kf_predict(*state.kalman, rate, dt, cfg.kf);
        if (const auto m = mag_heading(s, cfg.kf)) state.kalman = kf_update(*state.kalman, *m, cfg.kf);
        state.pose.heading = state.kalman->heading;
      } else {
        state.pose.heading = integrate_heading(state.pose.heading, rate, dt);
      }
      last_t = s.t;
      last_rate = s.gyro[yaw];
    }
  };

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const StepEvent& step = steps[k];
    advance_to(step.t);

    bool door_now = false;
    for (; next_record < records.size() && records[next_record].step_index == k; ++next_record) {
      result.events.entries.push_back({records[next_record].event.t_start, records[next_record]});
      door_now = true;
    }
    result.events.entries.push_back({step.t, step});

    const Point2 prev = state.pose.position;
    if (state.particles) {
      try {
        auto stepped = pf_step(*state.particles, state.pose.heading, cfg.pf, pdr, plan);
        state.particles = std::move(stepped.set);
        state.pose.position = stepped.estimate;
      } catch (const FilterDivergence& err) {
        if (cfg.divergence == DivergencePolicy::kFail) throw TrackError(k, err.what());
        try {
          auto reseeded = pf_init(state.pose, cfg.pf, filter_seed(cfg, k, 2));
          auto stepped = pf_step(std::move(reseeded), state.pose.heading, cfg.pf, pdr, plan);
          state.particles = std::move(stepped.set);
          state.pose.position = stepped.estimate;
        } catch (const FilterDivergence&) {
          state.pose = propagate_step(state.pose, pdr);
          state.particles = pf_init(state.pose, cfg.pf, filter_seed(cfg, k, 3));
          result.events.entries.push_back({step.t, FilterReset{k, state.pose.position}});
        }
      }
    } else {
      state.pose = propagate_step(state.pose, pdr);
    }
    state.step_count = k + 1;

    state.crossing = arm_check(std::move(state.crossing), state.pose, plan.doors, cfg.crossing);
    auto [crossing, ev] =
        observe_step(std::move(state.crossing), k, prev, state.pose.position, door_now, cfg.crossing, zones);
    state.crossing = std::move(crossing);
    if (ev) {
      const Point2 walked = state.pose.position - ev->crossing_point;
      state = on_switch(std::move(state), *ev, cfg);
      if (state.particles) {
        // Carry over the motion made since the crossing point.
        for (Particle& p : state.particles->particles) p.position = p.position + walked;
        state.pose.position = state.pose.position + walked;
      }
      result.events.entries.push_back({step.t, *ev});
    }
    result.path.push_back(state.pose);
    result.environments.push_back(state.environment);
  }
  for (; next_record < records.size(); ++next_record) {
    result.events.entries.push_back({records[next_record].event.t_start, records[next_record]});
  }
  return result;
}

}  // namespace seamloc
