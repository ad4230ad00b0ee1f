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

#pragma once

#include <string>

namespace noonsim {

/// Shortest round-trip decimal form of `value`, '.' separator, no locale.
std::string format_double(double value);

/// Maximum worker count honoring NOONSIM_SINGLE_THREAD=1.
int effective_threads(int requested);

}  // namespace noonsim
