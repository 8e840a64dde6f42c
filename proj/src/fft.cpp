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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace cvtele::detail {

namespace {

// FFTW planning is not thread-safe; execution with new-array plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Plans are made on a scratch buffer and reused through fftw_execute_dft, so
// they must not depend on the alignment of the caller's array.
const Plan& cached_plan(int n, int sign) {
    std::mutex& m = planner_mutex();  // constructed before, destroyed after, the cache
    static std::map<std::pair<int, int>, Plan> cache;
    std::lock_guard lock(m);
    auto& slot = cache[{n, sign}];
    if (!slot) {
        fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n));
        slot.reset(fftw_plan_dft_1d(n, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED));
        fftw_free(scratch);
    }
    return slot;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, FftDirection dir) {
    if (data.size() < 2) {
        return;
    }
    const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const Plan& plan = cached_plan(static_cast<int>(data.size()), sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan.get(), p, p);
}

}  // namespace cvtele::detail
