/*
   Copyright 2026 The pkpz authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "pkpz/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pkpz/parallel.hpp"

namespace pkpz::mc {

namespace {

constexpr double kPi = std::numbers::pi;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  constexpr std::uint64_t kM0 = 0xD2511F53ull;
  constexpr std::uint64_t kM1 = 0xCD9E8D57ull;
  const std::uint64_t p0 = kM0 * ctr[0];
  const std::uint64_t p1 = kM1 * ctr[2];
  const std::uint32_t out0 = static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0];
  const std::uint32_t out2 = static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1];
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr[0] = out0;
  ctr[1] = lo1;
  ctr[2] = out2;
  ctr[3] = lo0;
}

void validate_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev) || !(t < 1.0))
      throw std::domain_error("bridge times must be strictly increasing in (0,1)");
    prev = t;
  }
}

// Endpoint winding-class mixture weights phi_1(k rho) / phi_1^(rho)({0}).
long sample_winding(double rho, CounterRng& rng) {
  const double norm = specfun::wrapped_gaussian(specfun::CirclePoint(0.0, rho), 1.0, 1e-14);
  const double u = rng.uniform();
  double acc = specfun::gauss_density(0.0, 1.0) / norm;
  if (u <= acc) return 0;
  for (long k = 1;; ++k) {
    const double w = specfun::gauss_density(static_cast<double>(k) * rho, 1.0) / norm;
    acc += w;
    if (u <= acc) return k;
    acc += w;
    if (u <= acc) return -k;
    if (w < 1e-18) return 0;  // numerically exhausted tail
  }
}

// Bridge from 0 at time 0 to `end` at time 1, sequential conditionals.
void sample_bridge_to(std::span<const double> times, double end, CounterRng& rng,
                      std::vector<double>& out) {
  out.resize(times.size());
  double prev_t = 0.0, prev_v = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    const double frac = (t - prev_t) / (1.0 - prev_t);
    const double mean = prev_v + (end - prev_v) * frac;
    const double var = (t - prev_t) * (1.0 - t) / (1.0 - prev_t);
    prev_v = mean + std::sqrt(var) * rng.normal();
    prev_t = t;
    out[j] = prev_v;
  }
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id) : stream_(stream_id) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
}

void CounterRng::refill() {
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  std::uint32_t ctr[4] = {static_cast<std::uint32_t>(counter_),
                          static_cast<std::uint32_t>(counter_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t key[2] = {key_[0], key_[1]};
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, key);
    key[0] += kW0;
    key[1] += kW1;
  }
  buf_[0] = ctr[0];
  buf_[1] = ctr[1];
  buf_[2] = ctr[2];
  buf_[3] = ctr[3];
  ++counter_;
  pos_ = 0;
}

std::uint32_t CounterRng::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

double CounterRng::uniform() {
  const std::uint64_t a = next_u32() >> 5;  // 27 bits
  const std::uint64_t b = next_u32() >> 6;  // 26 bits
  return (static_cast<double>((a << 26) | b) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * kPi * u2;
  cached_normal_ = r * std::sin(th);
  has_cached_normal_ = true;
  return r * std::cos(th);
}

double CounterRng::exponential() { return -std::log(uniform()); }

BridgePath sample_bridge(std::span<const double> times, RandomStream stream) {
  validate_times(times);
  CounterRng rng(stream);
  BridgePath path;
  path.times.assign(times.begin(), times.end());
  sample_bridge_to(times, 0.0, rng, path.values);
  return path;
}

CircleBridgePath sample_circle_bridge(std::span<const double> times, double rho,
                                      RandomStream stream) {
  if (!(rho > 0.0)) throw std::domain_error("sample_circle_bridge: rho must be positive");
  validate_times(times);
  CounterRng rng(stream);
  CircleBridgePath path;
  path.times.assign(times.begin(), times.end());
  path.winding = sample_winding(rho, rng);
  std::vector<double> line;
  sample_bridge_to(times, static_cast<double>(path.winding) * rho, rng, line);
  path.values.reserve(line.size());
  for (double v : line) path.values.emplace_back(v, rho);
  return path;
}

Estimate estimate_limit_probability(int case_id, std::span<const double> x,
                                    std::span<const double> t, std::span<const double> h,
                                    double rho, long n_paths, RandomStream stream) {
  if (n_paths < 100) throw std::domain_error("estimate_limit_probability: need >= 100 paths");
  if (case_id < 1 || case_id > 3)
    throw std::domain_error("estimate_limit_probability: case must be 1, 2 or 3");
  if (t.size() != h.size() || (case_id != 3 && t.size() != x.size()))
    throw std::invalid_argument("estimate_limit_probability: length mismatch");
  if (case_id == 2 && !(rho > 0.0))
    throw std::domain_error("estimate_limit_probability: rho must be positive");
  validate_times(t);

  const std::size_t msz = t.size();
  const double hits = parallel::sum<double>(n_paths, [&](std::int64_t i) {
    CounterRng rng(stream.seed, stream.stream_id + static_cast<std::uint64_t>(i));
    thread_local std::vector<double> b1, b2;
    switch (case_id) {
      case 1: {
        sample_bridge_to(t, 0.0, rng, b1);
        sample_bridge_to(t, 0.0, rng, b2);
        for (std::size_t j = 0; j < msz; ++j)
          if (b2[j] - std::abs(b1[j] - x[j]) < h[j]) return 0.0;
        return 1.0;
      }
      case 2: {
        const long winding = sample_winding(rho, rng);
        sample_bridge_to(t, static_cast<double>(winding) * rho, rng, b1);
        sample_bridge_to(t, 0.0, rng, b2);
        for (std::size_t j = 0; j < msz; ++j) {
          const double d = specfun::dist_circle(specfun::CirclePoint(b1[j], rho),
                                                specfun::CirclePoint(x[j], rho));
          if (b2[j] - d < h[j]) return 0.0;
        }
        return 1.0;
      }
      default: {
        sample_bridge_to(t, 0.0, rng, b1);
        for (std::size_t j = 0; j < msz; ++j)
          if (b1[j] < h[j]) return 0.0;
        return 1.0;
      }
    }
  });

  Estimate est;
  est.n_paths = n_paths;
  est.seed = stream.seed;
  est.value = hits / static_cast<double>(n_paths);
  est.std_error = std::sqrt(std::max(est.value * (1.0 - est.value), 1e-300) /
                            static_cast<double>(n_paths));
  return est;
}

bool event_identity_pair(double x, double y, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("event_identity_pair: rho must be positive");
  // x + y lands in exactly one window [rho k, rho(k+1)).
  const double k = std::floor((x + y) / rho);
  const bool lhs = x - y >= -rho * k;
  const bool rhs =
      x >= specfun::dist_circle(specfun::CirclePoint(y, rho), specfun::CirclePoint(0.0, rho));
  return lhs == rhs;
}

long event_identity_check(long n_samples, double rho, RandomStream stream) {
  if (!(rho > 0.0)) throw std::domain_error("event_identity_check: rho must be positive");
  return static_cast<long>(parallel::sum<double>(n_samples, [&](std::int64_t i) {
    CounterRng rng(stream.seed, stream.stream_id + static_cast<std::uint64_t>(i));
    const double x = rng.normal();
    const double y = rng.normal();
    return event_identity_pair(x, y, rho) ? 0.0 : 1.0;
  }));
}

}  // namespace pkpz::mc
