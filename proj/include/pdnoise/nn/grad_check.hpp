// Copyright 2026 The pdnoise Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <vector>

#include "pdnoise/nn/tensor.hpp"

namespace pdnoise::nn {

struct GradCheckOptions {
  double step = 1e-5;
  /// Gradients smaller than this (in both routes) are compared absolutely.
  double floor = 1e-6;
};

/// Compares reverse-mode gradients with central finite differences.
///
/// `loss` evaluates the scalar loss at the current values. `backward` must
/// zero and then fill every Parameter::grad (and the returned input
/// gradients, one per entry of `inputs`). Returns the max relative error
/// |analytic - numeric| / max(|analytic|, |numeric|, floor) over every
/// parameter and input element.
double grad_check(const std::function<double()>& loss,
                  const std::function<std::vector<Tensor>()>& backward,
                  const std::vector<Parameter*>& params, const std::vector<Tensor*>& inputs,
                  const GradCheckOptions& options = {});

}  // namespace pdnoise::nn
