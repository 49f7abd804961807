#pragma once

#include <cstdint>
#include <vector>

#include "peds/report.hpp"
#include "peds/target_system.hpp"

namespace peds {

struct VerifyOptions {
  double alpha = 0.5;            // decay rate for the convergence-to-mean property; 0 disables it
  bool flip_decay_sign = false;  // mutation switch: decay pushes away from the mean
  std::uint64_t seed = 2024;
};

/// Runs every module property and returns one entry per property.
std::vector<PropertyCheck> run_verify(const VerifyOptions& opt = {});

/// dx_i/dt = x_i - x_i^2 - c x_i x_{i+1 mod 3}; interior fixed point x_i = 1/(1+c).
TargetSystem cyclic_competition(double c);

}  // namespace peds
