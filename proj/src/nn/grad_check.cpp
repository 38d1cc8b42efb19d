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

#include "pdnoise/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "pdnoise/error.hpp"

namespace pdnoise::nn {
namespace {

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

}  // namespace

double grad_check(const std::function<double()>& loss,
                  const std::function<std::vector<Tensor>()>& backward,
                  const std::vector<Parameter*>& params, const std::vector<Tensor*>& inputs,
                  const GradCheckOptions& options) {
  const auto input_grads = backward();
  if (input_grads.size() != inputs.size()) throw ShapeMismatch("grad_check: input gradient count mismatch");

  // Snapshot analytic gradients before the probes disturb anything.
  std::vector<Tensor> param_grads;
  for (const auto* p : params) param_grads.push_back(p->grad);

  const double h = options.step;
  double worst = 0.0;
  auto probe = [&](double& slot, double analytic) {
    const double saved = slot;
    slot = saved + h;
    const double up = loss();
    slot = saved - h;
    const double down = loss();
    slot = saved;
    worst = std::max(worst, relative_error(analytic, (up - down) / (2.0 * h), options.floor));
  };
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (std::size_t i = 0; i < params[k]->value.size(); ++i) probe(params[k]->value[i], param_grads[k][i]);
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (input_grads[k].size() != inputs[k]->size()) throw ShapeMismatch("grad_check: input gradient shape");
    for (std::size_t i = 0; i < inputs[k]->size(); ++i) probe((*inputs[k])[i], input_grads[k][i]);
  }
  return worst;
}

}  // namespace pdnoise::nn
