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

#include "noonsim/tagio.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "noonsim/error.hpp"
#include "noonsim/format.hpp"

namespace noonsim {

namespace {

void put_u64(std::ostream &out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream &in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char *>(bytes), 8)) {
        throw ValidationError("truncated binary tag file");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

std::uint8_t get_u8(std::istream &in) {
    char c;
    if (!in.get(c)) {
        throw ValidationError("truncated binary tag file");
    }
    return static_cast<std::uint8_t>(c);
}

template <class T>
T parse_number(std::string_view text, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError("bad number '" + std::string(text) + "' on line " + std::to_string(line));
    }
    return value;
}

}  // namespace

void write_tags_csv(std::ostream &out, const TagStream &stream) {
    out << "# duration_s=" << format_double(stream.duration_s) << '\n';
    out << "# channels=";
    for (std::size_t i = 0; i < stream.channels.size(); ++i) {
        out << (i ? "," : "") << stream.channels[i];
    }
    out << "\nchannel,timestamp_ps\n";
    for (const auto &r : stream.records) {
        out << static_cast<int>(r.channel) << ',' << r.timestamp_ps << '\n';
    }
}

TagStream read_tags_csv(std::istream &in) {
    TagStream stream;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("# duration_s=")) {
            stream.duration_s = parse_number<double>(std::string_view(line).substr(13), line_no);
            continue;
        }
        if (line.starts_with("# channels=")) {
            std::string_view rest = std::string_view(line).substr(11);
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                stream.channels.emplace_back(rest.substr(0, comma));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
            continue;
        }
        if (line.starts_with('#')) continue;
        if (!header) {
            if (line != "channel,timestamp_ps") {
                throw ValidationError("expected header 'channel,timestamp_ps' on line " + std::to_string(line_no));
            }
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("expected '<channel>,<timestamp_ps>' on line " + std::to_string(line_no));
        }
        const auto channel = parse_number<unsigned>(std::string_view(line).substr(0, comma), line_no);
        if (channel > 255) {
            throw ValidationError("channel id above 255 on line " + std::to_string(line_no));
        }
        stream.records.push_back({static_cast<std::uint8_t>(channel),
                                  parse_number<std::int64_t>(std::string_view(line).substr(comma + 1), line_no)});
    }
    if (stream.channels.empty()) {
        stream.channels = default_channel_names();
    }
    stream.validate();
    return stream;
}

void write_tags_binary(std::ostream &out, const TagStream &stream) {
    if (stream.channels.size() > 255) {
        throw ValidationError("binary tag format holds at most 255 channels");
    }
    out.write(kTagMagic, sizeof kTagMagic);
    put_u64(out, std::bit_cast<std::uint64_t>(stream.duration_s));
    out.put(static_cast<char>(stream.channels.size()));
    for (const auto &name : stream.channels) {
        if (name.size() > 255) {
            throw ValidationError("channel name too long for the binary tag format");
        }
        out.put(static_cast<char>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    put_u64(out, stream.records.size());
    for (const auto &r : stream.records) {
        if (r.timestamp_ps < 0) {
            throw ValidationError("binary tag format stores non-negative timestamps only");
        }
        out.put(static_cast<char>(r.channel));
        put_u64(out, static_cast<std::uint64_t>(r.timestamp_ps));
    }
}

TagStream read_tags_binary(std::istream &in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kTagMagic, 8) != 0) {
        throw ValidationError("not a binary tag file (bad magic)");
    }
    TagStream stream;
    stream.duration_s = std::bit_cast<double>(get_u64(in));
    const int n_channels = get_u8(in);
    for (int i = 0; i < n_channels; ++i) {
        std::string name(get_u8(in), '\0');
        if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
            throw ValidationError("truncated binary tag file");
        }
        stream.channels.push_back(std::move(name));
    }
    const std::uint64_t n_records = get_u64(in);
    stream.records.reserve(n_records);
    for (std::uint64_t i = 0; i < n_records; ++i) {
        const std::uint8_t channel = get_u8(in);
        stream.records.push_back({channel, static_cast<std::int64_t>(get_u64(in))});
    }
    stream.validate();
    return stream;
}

void save_tags(const std::filesystem::path &path, const TagStream &stream) {
    const bool binary = path.extension() == ".bin";
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw ValidationError("cannot open " + path.string() + " for writing");
    }
    binary ? write_tags_binary(out, stream) : write_tags_csv(out, stream);
}

TagStream load_tags(const std::filesystem::path &path) {
    const bool binary = path.extension() == ".bin";
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    return binary ? read_tags_binary(in) : read_tags_csv(in);
}

}  // namespace noonsim
