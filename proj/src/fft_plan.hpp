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

#ifndef CVLATTICE_SRC_FFT_PLAN_HPP
#define CVLATTICE_SRC_FFT_PLAN_HPP

#include <complex>
#include <memory>

#include <fftw3.h>

namespace cvlattice::detail {

/// Batched in-place complex FFT over a strided layout. Plans are created
/// with FFTW_UNALIGNED so they can be executed on any buffer of the same
/// shape. The FFTW planner itself is serialized internally.
class BatchedFft {
 public:
  /// `length` points per transform, `count` transforms; element k of
  /// transform b lives at offset k*stride + b*distance.
  BatchedFft(int length, int count, int stride, int distance, int sign);

  void execute(std::complex<double>* data) const;

  int length() const { return length_; }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const;
  };

  int length_;
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan_;
};

}  // namespace cvlattice::detail

#endif  // CVLATTICE_SRC_FFT_PLAN_HPP
