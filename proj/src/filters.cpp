#include "seamloc/filters.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace seamloc {

void PfConfig::validate() const {
  if (particle_count < 1) fail(ErrorCategory::kInvalidParameter, "particle_count must be >= 1");
  // Zero noise is accepted: it is the deterministic limit of the filter.
  if (!(step_sigma >= 0.0) || !(heading_sigma >= 0.0) || !(init_sigma >= 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "particle filter sigmas must be non-negative");
  }
  if (!(resample_threshold > 0.0 && resample_threshold <= 1.0)) {
    fail(ErrorCategory::kInvalidParameter, "resample_threshold must lie in (0, 1]");
  }
}

Point2 ParticleSet::mean() const {
  Point2 sum;
  double total = 0.0;
  for (const Particle& p : particles) {
    sum = sum + p.weight * p.position;
    total += p.weight;
  }
  return (1.0 / total) * sum;
}

double ParticleSet::effective_sample_size() const {
  double sq = 0.0;
  for (const Particle& p : particles) sq += p.weight * p.weight;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

ParticleSet pf_init(const Pose& pose0, const PfConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ParticleSet set;
  set.rng_seed = seed;
  set.rng.seed(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const double w = 1.0 / static_cast<double>(cfg.particle_count);
  set.particles.reserve(static_cast<std::size_t>(cfg.particle_count));
  for (int i = 0; i < cfg.particle_count; ++i) {
    const double dx = cfg.init_sigma * unit(set.rng);
    const double dy = cfg.init_sigma * unit(set.rng);
    set.particles.push_back({pose0.position + Point2{dx, dy}, w});
  }
  return set;
}

void systematic_resample(ParticleSet& set) {
  const std::size_t n = set.particles.size();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double step = 1.0 / static_cast<double>(n);
  double pointer = u01(set.rng) * step;
  double cumulative = set.particles.front().weight;
  std::size_t source = 0;
  std::vector<Particle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (pointer > cumulative && source + 1 < n) {
      ++source;
      cumulative += set.particles[source].weight;
    }
    out.push_back({set.particles[source].position, step});
    pointer += step;
  }
  set.particles = std::move(out);
}

PfStepResult pf_step(ParticleSet set, double heading, const PfConfig& cfg,
                     const PdrConfig& pdr_cfg, const FloorPlan& plan) {
  if (set.particles.empty()) {
    throw FilterDivergence("particle set is empty");
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  double total = 0.0;
  for (Particle& p : set.particles) {
    const double length = pdr_cfg.step_length + cfg.step_sigma * unit(set.rng);
    const double dir = heading + cfg.heading_sigma * unit(set.rng);
    const Point2 next = p.position + length * Point2{std::cos(dir), std::sin(dir)};
    if (p.weight > 0.0 && segment_hits_walls({p.position, next}, plan)) p.weight = 0.0;
    p.position = next;
    total += p.weight;
  }
  if (!(total > 0.0)) {
    throw FilterDivergence("every particle crossed a wall");
  }
  for (Particle& p : set.particles) p.weight /= total;

  const Point2 estimate = set.mean();
  if (set.effective_sample_size() <
      cfg.resample_threshold * static_cast<double>(set.particles.size())) {
    systematic_resample(set);
  }
  return {std::move(set), estimate};
}

void KfConfig::validate() const {
  if (!(q_heading > 0.0) || !(q_bias > 0.0) || !(r_mag > 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "Kalman noise terms must be positive");
  }
  if (!(init_heading_var >= 0.0) || !(init_bias_var >= 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "Kalman initial variances must be non-negative");
  }
}

HeadingKfState kf_seed(double heading, const KfConfig& cfg) {
  HeadingKfState state;
  state.heading = wrap_angle(heading);
  state.covariance << cfg.init_heading_var, 0.0, 0.0, cfg.init_bias_var;
  return state;
}

std::optional<double> mag_heading(const ImuSample& sample, const KfConfig& cfg) {
  const double mx = sample.mag[0];
  const double my = sample.mag[1];
  if (std::hypot(mx, my) < 1.0) return std::nullopt;
  return wrap_angle(std::atan2(-my, mx) + cfg.declination);
}

HeadingKfState kf_predict(const HeadingKfState& state, double gyro_yaw_rate, double dt,
                          const KfConfig& cfg) {
  if (!(dt > 0.0)) fail(ErrorCategory::kInvalidParameter, "dt must be positive");
  HeadingKfState next = state;
  next.heading = wrap_angle(state.heading + (gyro_yaw_rate - state.gyro_bias) * dt);
  Eigen::Matrix2d f;
  f << 1.0, -dt, 0.0, 1.0;
  Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
  q(0, 0) = cfg.q_heading * dt;
  q(1, 1) = cfg.q_bias * dt;
  next.covariance = f * state.covariance * f.transpose() + q;
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose()).eval();
  return next;
}

HeadingKfState kf_update(const HeadingKfState& state, double measured_heading,
                         const KfConfig& cfg) {
  const Eigen::Matrix2d& p = state.covariance;
  const double innovation = wrap_angle(measured_heading - state.heading);
  const double s = p(0, 0) + cfg.r_mag;
  const Eigen::Vector2d k(p(0, 0) / s, p(1, 0) / s);

  HeadingKfState next = state;
  next.heading = wrap_angle(state.heading + k(0) * innovation);
  next.gyro_bias = state.gyro_bias + k(1) * innovation;

  // Joseph form keeps the posterior symmetric PSD.
  Eigen::Matrix2d i_kh = Eigen::Matrix2d::Identity();
  i_kh(0, 0) -= k(0);
  i_kh(1, 0) -= k(1);
  next.covariance = i_kh * p * i_kh.transpose() + cfg.r_mag * (k * k.transpose());
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose()).eval();
  return next;
}

const HeadingKfState& HeadingKalman::update(const ImuSample& sample) {
  const double rate = sample.gyro[static_cast<int>(axis_)];
  if (primed_) {
    state_ = kf_predict(state_, 0.5 * (last_rate_ + rate), sample.t - last_t_, cfg_);
  }
  primed_ = true;
  last_t_ = sample.t;
  last_rate_ = rate;
  if (const auto measured = mag_heading(sample, cfg_)) state_ = kf_update(state_, *measured, cfg_);
  return state_;
}

}  // namespace seamloc
