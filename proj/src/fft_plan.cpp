// Copyright 2026 The cvlattice Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fft_plan.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace cvlattice::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}
}  // namespace

void BatchedFft::PlanDeleter::operator()(fftw_plan_s* plan) const {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

BatchedFft::BatchedFft(int length, int count, int stride, int distance,
                       int sign)
    : length_(length) {
  if (length < 1 || count < 1) {
    throw std::invalid_argument("BatchedFft: empty transform");
  }
  // Scratch buffer for planning only; FFTW_ESTIMATE does not touch it.
  std::vector<std::complex<double>> scratch(
      static_cast<std::size_t>(length - 1) * stride +
      static_cast<std::size_t>(count - 1) * distance + 1);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  int n[1] = {length};
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan plan = fftw_plan_many_dft(1, n, count, buf, nullptr, stride,
                                      distance, buf, nullptr, stride, distance,
                                      sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) {
    throw std::runtime_error("BatchedFft: FFTW planning failed");
  }
  plan_.reset(plan);
}

void BatchedFft::execute(std::complex<double>* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_.get(), buf, buf);
}

}  // namespace cvlattice::detail
