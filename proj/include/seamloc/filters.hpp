#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "seamloc/geometry.hpp"
#include "seamloc/pdr.hpp"
#include "seamloc/signal.hpp"

namespace seamloc {

// ---------------------------------------------------------------------------
// Particle filter (indoor)
// ---------------------------------------------------------------------------

struct Particle {
  Point2 position;
  double weight = 0.0;
};

struct PfConfig {
  int particle_count = 1000;
  double step_sigma = 0.1;       // m
  double heading_sigma = 0.087;  // rad
  double init_sigma = 0.5;       // m
  double resample_threshold = 0.5;

  void validate() const;
};

/// Particles plus the generator that drives them; copying a set copies the
/// generator state, so a copy replays identically.
struct ParticleSet {
  std::vector<Particle> particles;
  std::uint64_t rng_seed = 0;
  std::mt19937_64 rng;

  Point2 mean() const;
  double effective_sample_size() const;
};

struct PfStepResult {
  ParticleSet set;
  Point2 estimate;
};

ParticleSet pf_init(const Pose& pose0, const PfConfig& cfg, std::uint64_t seed);

/// Moves every particle one noisy step, zeroes particles whose motion
/// crosses a wall, renormalises, and resamples when the ESS drops.
/// Throws FilterDivergence when no particle survives.
PfStepResult pf_step(ParticleSet set, double heading, const PfConfig& cfg,
                     const PdrConfig& pdr_cfg, const FloorPlan& plan);

/// Systematic resampling to the same count with uniform weights.
void systematic_resample(ParticleSet& set);

// ---------------------------------------------------------------------------
// Heading Kalman filter (outdoor)
// ---------------------------------------------------------------------------

struct KfConfig {
  double q_heading = 1e-3;  // rad^2/s
  double q_bias = 1e-6;     // (rad/s)^2/s
  double r_mag = 0.05;      // rad^2
  double declination = 0.0; // rad
  /// Initial variances used when a filter is seeded.
  double init_heading_var = 0.01;
  double init_bias_var = 1e-4;

  void validate() const;
};

/// State [heading, gyro_bias] with its 2x2 covariance.
struct HeadingKfState {
  double heading = 0.0;
  double gyro_bias = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
};

HeadingKfState kf_seed(double heading, const KfConfig& cfg);

/// Horizontal-device compass heading; empty when the horizontal field is
/// below 1 microtesla.
std::optional<double> mag_heading(const ImuSample& sample, const KfConfig& cfg);

HeadingKfState kf_predict(const HeadingKfState& state, double gyro_yaw_rate, double dt,
                          const KfConfig& cfg);

HeadingKfState kf_update(const HeadingKfState& state, double measured_heading,
                         const KfConfig& cfg);

/// Runs predict+update over a sample stream.
class HeadingKalman {
 public:
  HeadingKalman(HeadingKfState state, Axis yaw_axis, KfConfig cfg)
      : state_(state), axis_(yaw_axis), cfg_(cfg) {}

  const HeadingKfState& update(const ImuSample& sample);
  const HeadingKfState& state() const { return state_; }

 private:
  HeadingKfState state_;
  Axis axis_;
  KfConfig cfg_;
  bool primed_ = false;
  double last_t_ = 0.0;
  double last_rate_ = 0.0;
};

}  // namespace seamloc
