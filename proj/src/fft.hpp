// Copyright 2026 The cvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVTELE_SRC_FFT_HPP
#define CVTELE_SRC_FFT_HPP

#include <complex>
#include <span>

namespace cvtele::detail {

enum class FftDirection { Forward, Backward };

/// Unnormalized in-place DFT: sum_j a_j e^{-+2 pi i jk/n}. Forward uses the
/// minus sign. Safe to call concurrently.
void fft_inplace(std::span<std::complex<double>> data, FftDirection dir);

}  // namespace cvtele::detail

#endif
