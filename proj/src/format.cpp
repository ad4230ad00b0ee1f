// Copyright 2026 The noonsim Authors
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

#include "noonsim/format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string_view>

namespace noonsim {

std::string format_double(double value) {
    if (value == 0.0) {
        return "0";  // folds -0
    }
    if (std::isnan(value)) {
        return "nan";
    }
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

int effective_threads(int requested) {
    if (const char *env = std::getenv("NOONSIM_SINGLE_THREAD"); env != nullptr && std::string_view(env) == "1") {
        return 1;
    }
    return std::max(requested, 1);
}

}  // namespace noonsim
