// Copyright 2026 The magcoloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded generator of magnetometer traces for public-transport journeys.
//
// The on-board field is a deterministic function of route position: an
// ambient level plus Gaussian distortion bumps, saturated at a vehicle-kind
// peak (bus < overground < underground), with an extra per-carriage layer.
// Stationary dwells can add a carriage-specific oscillation. Passengers in
// the same carriage see the same field shifted by their seat offset; each
// device then applies its own gain, bias, noise, timestamp jitter and clock
// offset.

#ifndef MAGCOLOC_SYNTH_HPP_
#define MAGCOLOC_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magcoloc/error.hpp"
#include "magcoloc/model.hpp"

namespace magcoloc {

enum class VehicleKind { kOvergroundTrain, kUndergroundTube, kBus };

constexpr std::string_view to_string(VehicleKind kind) {
  switch (kind) {
    case VehicleKind::kOvergroundTrain: return "overground";
    case VehicleKind::kUndergroundTube: return "underground";
    case VehicleKind::kBus: return "bus";
  }
  return "overground";
}

inline VehicleKind parse_vehicle_kind(std::string_view name) {
  if (name == "overground") return VehicleKind::kOvergroundTrain;
  if (name == "underground") return VehicleKind::kUndergroundTube;
  if (name == "bus") return VehicleKind::kBus;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown vehicle kind '" + std::string(name) + "'");
}

struct VehicleProfile {
  double cruise_speed_mps;
  double peak_deviation_ut;
  int max_carriages;
};

// Average speeds 30/60/20 km/h, peak distortions 210/350/80 uT and at most
// 8/7/2 coaches (decks for a bus).
constexpr VehicleProfile profile(VehicleKind kind) {
  switch (kind) {
    case VehicleKind::kOvergroundTrain: return {30.0 / 3.6, 210.0, 8};
    case VehicleKind::kUndergroundTube: return {60.0 / 3.6, 350.0, 7};
    case VehicleKind::kBus: return {20.0 / 3.6, 80.0, 2};
  }
  return {30.0 / 3.6, 210.0, 8};
}

inline constexpr double kDefaultSampleRateHz = 49.65;

struct DeviceModel {
  std::string device_id = "device";
  double sensitivity_gain = 1.0;
  double bias_ut = 0.0;
  double noise_sigma_ut = 1.0;
  double sample_rate_hz = kDefaultSampleRateHz;
  std::int64_t clock_offset_ms = 0;
  std::uint64_t seed = 0;  // noise, jitter, orientation, label latency

  void validate() const {
    detail::require(!device_id.empty(), ErrorKind::kInvalidArgument,
                    "device id is empty");
    detail::require(std::isfinite(sensitivity_gain) && sensitivity_gain > 0.0,
                    ErrorKind::kInvalidArgument, "gain must be positive");
    detail::require(std::isfinite(bias_ut), ErrorKind::kInvalidArgument,
                    "bias must be finite");
    detail::require(std::isfinite(noise_sigma_ut) && noise_sigma_ut >= 0.0,
                    ErrorKind::kInvalidArgument, "noise sigma must be >= 0");
    detail::require(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0,
                    ErrorKind::kInvalidArgument,
                    "sample rate must be positive");
  }
};

struct JourneySpec {
  std::uint64_t route_seed = 0;
  int n_stations = 2;
  double segment_duration_s = 180.0;  // per inter-station leg
  VehicleKind vehicle_kind = VehicleKind::kOvergroundTrain;
  int carriage_index = 0;
  double seat_offset_m = 0.0;
  DeviceModel device;
  std::int64_t depart_ms = 0;  // boarding, reference time
  double walk_before_s = 30.0;
  double walk_after_s = 30.0;

  void validate() const {
    device.validate();
    detail::require(n_stations >= 2, ErrorKind::kInvalidArgument,
                    "a journey needs at least two stations");
    detail::require(segment_duration_s >= 60.0, ErrorKind::kInvalidArgument,
                    "legs last at least 60 s");
    detail::require(carriage_index >= 0 &&
                        carriage_index < profile(vehicle_kind).max_carriages,
                    ErrorKind::kInvalidArgument,
                    "carriage index out of range for vehicle kind");
    detail::require(std::isfinite(seat_offset_m), ErrorKind::kInvalidArgument,
                    "seat offset must be finite");
    detail::require(walk_before_s >= 0.0 && walk_after_s >= 0.0,
                    ErrorKind::kInvalidArgument,
                    "walking durations must be >= 0");
  }
};

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ull;
  for (std::uint64_t p : parts) h = splitmix(h ^ splitmix(p));
  return h;
}

inline double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Distribution mapping is done here rather than through <random>
// distributions so generated corpora are identical across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unit_interval(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

// Position-indexed on-board field of one route.
class FieldModel {
 public:
  static constexpr double kAmbientUt = 50.0;
  static constexpr double kBumpSpacingM = 6.0;
  static constexpr double kMinBumpWidthM = 4.0;
  static constexpr double kMaxBumpWidthM = 8.0;
  static constexpr double kCarriageWeight = 0.6;
  static constexpr double kShapeGain = 1.5;
  static constexpr double kNegativeShare = 0.6;
  static constexpr double kHotSpotSpacingM = 1000.0;
  static constexpr double kHotSpotWidthM = 40.0;
  static constexpr double kHotSpotFloor = 0.15;

  FieldModel(std::uint64_t route_seed, int n_stations, VehicleKind kind)
      : seed_(route_seed), n_stations_(n_stations), kind_(kind) {
    detail::require(n_stations >= 2, ErrorKind::kInvalidArgument,
                    "a route needs at least two stations");
    base_phase_ = 2.0 * std::numbers::pi *
                  detail::unit_interval(detail::derive_seed({seed_, 1}));
  }

  VehicleKind kind() const { return kind_; }
  int n_stations() const { return n_stations_; }
  double peak_deviation_cap() const { return profile(kind_).peak_deviation_ut; }

  // Slowly varying background level.
  double base(double position_m) const {
    return kAmbientUt + 3.0 * std::sin(position_m / 350.0 + base_phase_);
  }

  // Distortion relative to base(), strictly inside
  // (-kNegativeShare * cap, cap).
  double deviation(double position_m, int carriage) const {
    const double z = bumps(position_m, detail::derive_seed({seed_, 2})) +
                     kCarriageWeight *
                         bumps(position_m,
                               detail::derive_seed(
                                   {seed_, 3, static_cast<std::uint64_t>(carriage)}));
    const double shaped =
        0.5 * (1.0 + kNegativeShare) * (std::tanh(kShapeGain * z) + 1.0) -
        kNegativeShare;
    return peak_deviation_cap() * shaped * envelope(position_m);
  }

  // Signed field along the sensing direction. The recorder takes the
  // magnitude, so a distortion larger than the ambient field folds back up.
  double at(double position_m, int carriage) const {
    return base(position_m) + deviation(position_m, carriage);
  }

 private:
  // Sum of Gaussian bumps, one per kBumpSpacingM cell, with standard normal
  // amplitudes.
  double bumps(double x, std::uint64_t layer) const {
    const double reach = 4.0 * kMaxBumpWidthM;
    const auto first =
        static_cast<std::int64_t>(std::floor((x - reach) / kBumpSpacingM));
    const auto last =
        static_cast<std::int64_t>(std::floor((x + reach) / kBumpSpacingM));
    double sum = 0.0;
    for (std::int64_t cell = first; cell <= last; ++cell) {
      const std::uint64_t h =
          detail::derive_seed({layer, static_cast<std::uint64_t>(cell)});
      const double centre =
          (static_cast<double>(cell) + detail::unit_interval(h)) * kBumpSpacingM;
      const double width =
          kMinBumpWidthM + (kMaxBumpWidthM - kMinBumpWidthM) *
                               detail::unit_interval(detail::splitmix(h ^ 1));
      const double u1 = 1.0 - detail::unit_interval(detail::splitmix(h ^ 2));
      const double u2 = detail::unit_interval(detail::splitmix(h ^ 3));
      const double amplitude = std::sqrt(-2.0 * std::log(u1)) *
                               std::cos(2.0 * std::numbers::pi * u2);
      const double d = (x - centre) / width;
      sum += amplitude * std::exp(-0.5 * d * d);
    }
    return sum;
  }

  // Electric traction distorts everywhere; buses only see sparse hot spots.
  double envelope(double x) const {
    if (kind_ != VehicleKind::kBus) return 1.0;
    const double spacing = kHotSpotSpacingM;
    const double width = kHotSpotWidthM;
    const double floor = kHotSpotFloor;
    const auto cell = static_cast<std::int64_t>(std::floor(x / spacing));
    double peak = 0.0;
    for (std::int64_t c = cell - 2; c <= cell + 2; ++c) {
      const double centre =
          (static_cast<double>(c) +
           detail::unit_interval(
               detail::derive_seed({seed_, 4, static_cast<std::uint64_t>(c)}))) *
          spacing;
      const double d = (x - centre) / width;
      peak = std::max(peak, std::exp(-0.5 * d * d));
    }
    return floor + (1.0 - floor) * peak;
  }

  std::uint64_t seed_;
  int n_stations_;
  VehicleKind kind_;
  double base_phase_ = 0.0;
};

inline FieldModel generate_field(std::uint64_t route_seed, int n_stations,
                                 VehicleKind kind) {
  return FieldModel(route_seed, n_stations, kind);
}

// Vehicle kinematics of one ride: a dwell at the origin, trapezoidal-speed
// legs separated by station dwells, and a short dwell on arrival. Dwell
// lengths derive from the route seed so everyone on board shares them.
class RideKinematics {
 public:
  static constexpr double kMaxAccelMps2 = 0.8;

  struct State {
    double position_m = 0.0;
    int dwell = -1;             // dwell index, -1 while moving
    double dwell_elapsed_s = 0.0;
    double dwell_length_s = 0.0;
  };

  RideKinematics(std::uint64_t route_seed, int n_stations, double leg_s,
                 VehicleKind kind)
      : leg_s_(leg_s) {
    const VehicleProfile p = profile(kind);
    cruise_ = p.cruise_speed_mps;
    accel_s_ = std::min(leg_s / 4.0, cruise_ / kMaxAccelMps2);
    leg_m_ = cruise_ * (leg_s - accel_s_);
    detail::Rng rng(detail::derive_seed({route_seed, 5}));
    dwells_.push_back(rng.uniform(8.0, 15.0));
    for (int k = 0; k + 2 < n_stations; ++k) {
      dwells_.push_back(rng.uniform(20.0, 40.0));
    }
    dwells_.push_back(rng.uniform(5.0, 10.0));
    duration_s_ = static_cast<double>(n_stations - 1) * leg_s;
    for (double d : dwells_) duration_s_ += d;
  }

  double duration_s() const { return duration_s_; }
  const std::vector<double>& dwells() const { return dwells_; }

  State at(double t_s) const {
    State s;
    double t = std::clamp(t_s, 0.0, duration_s_);
    for (std::size_t d = 0; d < dwells_.size(); ++d) {
      if (t < dwells_[d] || d + 1 == dwells_.size()) {
        s.dwell = static_cast<int>(d);
        s.dwell_elapsed_s = std::min(t, dwells_[d]);
        s.dwell_length_s = dwells_[d];
        s.position_m = static_cast<double>(d) * leg_m_;
        return s;
      }
      t -= dwells_[d];
      if (t < leg_s_) {
        s.position_m = static_cast<double>(d) * leg_m_ + leg_distance(t);
        return s;
      }
      t -= leg_s_;
    }
    return s;
  }

 private:
  double leg_distance(double t) const {
    const double a = cruise_ / accel_s_;
    if (t < accel_s_) return 0.5 * a * t * t;
    const double braking_start = leg_s_ - accel_s_;
    if (t <= braking_start) return 0.5 * cruise_ * accel_s_ + cruise_ * (t - accel_s_);
    const double r = leg_s_ - t;
    return leg_m_ - 0.5 * a * r * r;
  }

  double leg_s_;
  double cruise_ = 0.0;
  double accel_s_ = 0.0;
  double leg_m_ = 0.0;
  double duration_s_ = 0.0;
  std::vector<double> dwells_;
};

// Ground truth for one generated ride, in reference time.
struct JourneyTruth {
  std::uint64_t route_seed = 0;
  int carriage_index = 0;
  std::int64_t board_ms = 0;
  std::int64_t alight_ms = 0;
};

struct GeneratedTrace {
  Trace trace;
  std::vector<JourneyTruth> journeys;
};

namespace detail {

// Carriage-specific oscillation while the train stands at a station; present
// on roughly half of the (dwell, carriage) combinations.
inline double dwell_oscillation(std::uint64_t route_seed, int carriage,
                                double cap, const RideKinematics::State& s) {
  if (s.dwell < 0 || s.dwell_length_s <= 0.0) return 0.0;
  Rng rng(derive_seed({route_seed, 6, static_cast<std::uint64_t>(s.dwell),
                       static_cast<std::uint64_t>(carriage)}));
  if (!rng.bernoulli(0.5)) return 0.0;
  const double amplitude = rng.uniform(0.05, 0.25) * cap;
  const double freq_hz = rng.uniform(0.1, 0.6);
  const double tau = s.dwell_elapsed_s;
  const double taper = std::sin(std::numbers::pi * tau / s.dwell_length_s);
  return amplitude * taper * 0.5 *
         (1.0 - std::cos(2.0 * std::numbers::pi * freq_hz * tau));
}

// Samples one device on its own clock grid and turns modelled field
// strengths into noisy 3-axis readings.
class DeviceRecorder {
 public:
  explicit DeviceRecorder(const DeviceModel& device)
      : device_(device),
        rng_(derive_seed({device.seed, 7})),
        period_ms_(1000.0 / device.sample_rate_hz) {
    trace_.device_id = device.device_id;
    trace_.clock_offset_ms = device.clock_offset_ms;
    phase_ms_ = rng_.uniform(0.0, period_ms_);
    theta0_ = rng_.uniform(0.3, 2.8);
    phi0_ = rng_.uniform(0.0, 2.0 * std::numbers::pi);
    theta_rate_ = rng_.uniform(-0.02, 0.02);
    phi_rate_ = rng_.uniform(-0.05, 0.05);
  }

  Rng& rng() { return rng_; }

  // Records every grid instant in [t0_ms, t1_ms) of reference time.
  // `sample(t_ms)` returns the true field strength and the reported label.
  template <class SampleFn>
  void record(double t0_ms, double t1_ms, SampleFn&& sample) {
    auto k = static_cast<std::int64_t>(std::ceil((t0_ms - phase_ms_) / period_ms_));
    for (double t = phase_ms_ + static_cast<double>(k) * period_ms_; t < t1_ms;
         t = phase_ms_ + static_cast<double>(++k) * period_ms_) {
      const auto [field_ut, label] = sample(t);
      const double jitter = std::clamp(1.5 * rng_.normal(), -5.0, 5.0);
      std::int64_t local = std::llround(t + jitter) - device_.clock_offset_ms;
      if (!trace_.samples.empty() && local <= trace_.samples.back().t_ms) {
        local = trace_.samples.back().t_ms + 1;
      }
      const double measured = std::abs(device_.sensitivity_gain * field_ut +
                                       device_.bias_ut +
                                       device_.noise_sigma_ut * rng_.normal());
      const double ts = t / 1000.0;
      const double theta = theta0_ + theta_rate_ * std::fmod(ts, 3600.0);
      const double phi = phi0_ + phi_rate_ * std::fmod(ts, 3600.0);
      trace_.samples.push_back(MagneticSample{
          local, measured * std::sin(theta) * std::cos(phi),
          measured * std::sin(theta) * std::sin(phi),
          measured * std::cos(theta), label});
    }
  }

  Trace take() { return std::move(trace_); }

 private:
  DeviceModel device_;
  Rng rng_;
  double period_ms_;
  double phase_ms_ = 0.0;
  double theta0_ = 0.0;
  double phi0_ = 0.0;
  double theta_rate_ = 0.0;
  double phi_rate_ = 0.0;
  Trace trace_;
};

// Appends walk - ride - walk for one journey and returns its ground truth.
inline JourneyTruth record_journey(DeviceRecorder& recorder,
                                   const JourneySpec& spec) {
  const FieldModel field(spec.route_seed, spec.n_stations, spec.vehicle_kind);
  const RideKinematics ride(spec.route_seed, spec.n_stations,
                            spec.segment_duration_s, spec.vehicle_kind);
  Rng& rng = recorder.rng();
  const double board = static_cast<double>(spec.depart_ms);
  const double alight = board + ride.duration_s() * 1000.0;
  // The recognizer reports boarding a little late.
  const double label_latency_ms = rng.uniform(0.0, 3000.0);
  const ActivityLabel foot =
      rng.bernoulli(0.5) ? ActivityLabel::kOnFoot : ActivityLabel::kWalking;
  // Occasional short misclassification while riding.
  const bool flicker = rng.bernoulli(0.3);
  const double flicker_start =
      board + rng.uniform(0.2, 0.8) * (alight - board);
  const double flicker_end = flicker_start + rng.uniform(2000.0, 5000.0);
  const ActivityLabel flicker_label =
      rng.bernoulli(0.5) ? ActivityLabel::kStill : ActivityLabel::kTilting;
  const double walk_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

  auto walking_field = [&](double t_ms) {
    return FieldModel::kAmbientUt + 6.0 * std::sin(t_ms / 40000.0 + walk_phase);
  };
  const double cap = field.peak_deviation_cap();

  recorder.record(board - spec.walk_before_s * 1000.0, board, [&](double t) {
    return std::pair{walking_field(t), foot};
  });
  recorder.record(board, alight, [&](double t) {
    const RideKinematics::State s = ride.at((t - board) / 1000.0);
    const double value =
        field.at(s.position_m + spec.seat_offset_m, spec.carriage_index) +
        dwell_oscillation(spec.route_seed, spec.carriage_index, cap, s);
    ActivityLabel label = ActivityLabel::kInVehicle;
    if (t < board + label_latency_ms) {
      label = foot;
    } else if (flicker && t >= flicker_start && t < flicker_end) {
      label = flicker_label;
    }
    return std::pair{value, label};
  });
  recorder.record(alight, alight + spec.walk_after_s * 1000.0, [&](double t) {
    return std::pair{walking_field(t), foot};
  });
  return JourneyTruth{spec.route_seed, spec.carriage_index, spec.depart_ms,
                      static_cast<std::int64_t>(std::llround(alight))};
}

inline void require_representable(const JourneySpec& spec) {
  const double first_local = static_cast<double>(spec.depart_ms) -
                             spec.walk_before_s * 1000.0 -
                             static_cast<double>(spec.device.clock_offset_ms);
  detail::require(first_local >= 0.0, ErrorKind::kInvalidArgument,
                  "journey starts before local epoch");
}

}  // namespace detail

// Single journey wrapped in on-foot episodes.
inline GeneratedTrace generate_trace(const JourneySpec& spec) {
  spec.validate();
  detail::require_representable(spec);
  detail::DeviceRecorder recorder(spec.device);
  GeneratedTrace out;
  out.journeys.push_back(detail::record_journey(recorder, spec));
  out.trace = recorder.take();
  return out;
}

struct CorpusOptions {
  VehicleKind vehicle_kind = VehicleKind::kOvergroundTrain;
  double min_leg_s = 60.0;
  double max_leg_s = 540.0;
  int n_stations = 2;
  double slot_period_s = 900.0;  // one journey per user per slot
  std::int64_t day_start_ms = 1'500'000'000'000;
};

struct Corpus {
  std::vector<Trace> traces;
  std::vector<std::vector<JourneyTruth>> journeys;  // per trace
  // Trajectory ids "<device>.<journey>" of truly co-located rides.
  std::vector<std::pair<std::string, std::string>> coloc_pairs;
};

inline std::string corpus_device_id(std::size_t user) {
  std::string digits = std::to_string(user);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return "u" + digits;
}

// `n_users` traces of `n_journeys` rides each. In every journey slot each
// user independently joins the slot's shared ride with probability
// `coloc_fraction` (same route, carriage and departure, own seat and
// device); otherwise they ride an unrelated route alone.
inline Corpus generate_corpus(std::size_t n_users, std::size_t n_journeys,
                              double coloc_fraction, std::uint64_t master_seed,
                              const CorpusOptions& options = {}) {
  detail::require(coloc_fraction >= 0.0 && coloc_fraction <= 1.0,
                  ErrorKind::kInvalidArgument,
                  "coloc_fraction must lie in [0, 1]");
  detail::require(options.min_leg_s >= 60.0 &&
                      options.max_leg_s >= options.min_leg_s &&
                      options.n_stations >= 2,
                  ErrorKind::kInvalidArgument, "invalid corpus options");
  const VehicleProfile vp = profile(options.vehicle_kind);
  const double longest_ride_s =
      static_cast<double>(options.n_stations - 1) * (options.max_leg_s + 40.0) +
      30.0;
  detail::require(options.slot_period_s >= longest_ride_s + 200.0,
                  ErrorKind::kInvalidArgument,
                  "slot period too short for the longest ride");

  struct SlotRide {
    std::uint64_t route_seed;
    int carriage;
    double leg_s;
    std::int64_t depart_ms;
  };
  auto plan_ride = [&](detail::Rng& rng, std::int64_t slot_start_ms,
                       std::uint64_t route_seed) {
    SlotRide r;
    r.route_seed = route_seed;
    r.carriage = static_cast<int>(rng.uniform_int(0, vp.max_carriages - 1));
    r.leg_s = rng.uniform(options.min_leg_s, options.max_leg_s);
    r.depart_ms = slot_start_ms + 60'000 + rng.uniform_int(0, 60'000);
    return r;
  };

  Corpus corpus;
  std::vector<detail::DeviceRecorder> recorders;
  std::vector<DeviceModel> devices;
  for (std::size_t u = 0; u < n_users; ++u) {
    detail::Rng rng(detail::derive_seed({master_seed, 10, u}));
    DeviceModel d;
    d.device_id = corpus_device_id(u);
    d.sensitivity_gain = rng.uniform(0.9, 1.1);
    d.bias_ut = rng.uniform(-15.0, 15.0);
    d.noise_sigma_ut = 1.0;
    d.clock_offset_ms = rng.uniform_int(-30'000, 30'000);
    d.seed = detail::derive_seed({master_seed, 11, u});
    devices.push_back(d);
    recorders.emplace_back(d);
  }
  corpus.journeys.resize(n_users);

  for (std::size_t k = 0; k < n_journeys; ++k) {
    const std::int64_t slot_start =
        options.day_start_ms +
        static_cast<std::int64_t>(k) *
            static_cast<std::int64_t>(options.slot_period_s * 1000.0);
    detail::Rng slot_rng(detail::derive_seed({master_seed, 20, k}));
    const SlotRide shared =
        plan_ride(slot_rng, slot_start, detail::derive_seed({master_seed, 21, k}));

    std::vector<std::size_t> riders;
    for (std::size_t u = 0; u < n_users; ++u) {
      detail::Rng rng(detail::derive_seed({master_seed, 30, k, u}));
      const bool joins = coloc_fraction > 0.0 && rng.uniform() < coloc_fraction;
      const SlotRide ride =
          joins ? shared
                : plan_ride(rng, slot_start,
                            detail::derive_seed({master_seed, 31, k, u}));
      if (joins) riders.push_back(u);

      JourneySpec spec;
      spec.route_seed = ride.route_seed;
      spec.n_stations = options.n_stations;
      spec.segment_duration_s = ride.leg_s;
      spec.vehicle_kind = options.vehicle_kind;
      spec.carriage_index = ride.carriage;
      spec.seat_offset_m = rng.uniform(-3.5, 3.5);
      spec.device = devices[u];
      spec.depart_ms = ride.depart_ms;
      spec.walk_before_s = rng.uniform(25.0, 50.0);
      spec.walk_after_s = rng.uniform(25.0, 50.0);
      spec.validate();
      detail::require_representable(spec);
      corpus.journeys[u].push_back(detail::record_journey(recorders[u], spec));
    }
    for (std::size_t x = 0; x < riders.size(); ++x) {
      for (std::size_t y = x + 1; y < riders.size(); ++y) {
        corpus.coloc_pairs.emplace_back(
            corpus_device_id(riders[x]) + "." + std::to_string(k),
            corpus_device_id(riders[y]) + "." + std::to_string(k));
      }
    }
  }
  for (auto& recorder : recorders) corpus.traces.push_back(recorder.take());
  return corpus;
}

}  // namespace magcoloc

#endif  // MAGCOLOC_SYNTH_HPP_
