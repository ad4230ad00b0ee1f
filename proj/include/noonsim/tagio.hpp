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

#include <filesystem>
#include <iosfwd>

#include "noonsim/tagsim.hpp"

namespace noonsim {

// Tag stream files.
//
// CSV: optional "# duration_s=<s>" and "# channels=<name>,<name>,..." lines,
// then the header "channel,timestamp_ps" and one "<id>,<ps>" row per click.
//
// Binary, all integers little-endian:
//   magic        8 bytes  "NOONTAG1"
//   duration_s   8 bytes  IEEE-754 binary64
//   n_channels   1 byte
//   per channel  1 byte name length, then the name bytes
//   n_records    8 bytes  u64
//   per record   1 byte channel id (u8), 8 bytes timestamp_ps (u64)

inline constexpr char kTagMagic[8] = {'N', 'O', 'O', 'N', 'T', 'A', 'G', '1'};

void write_tags_csv(std::ostream &out, const TagStream &stream);
TagStream read_tags_csv(std::istream &in);

void write_tags_binary(std::ostream &out, const TagStream &stream);
TagStream read_tags_binary(std::istream &in);

/// Picks the format from the extension: ".bin" is binary, anything else CSV.
void save_tags(const std::filesystem::path &path, const TagStream &stream);
TagStream load_tags(const std::filesystem::path &path);

}  // namespace noonsim
