/*
 * Copyright (C) 2026 The panoloom authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PANOLOOM_TOOLS_RUN_CONFIG_HPP
#define PANOLOOM_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace panoloom::cli {

// Argument-level misuse the parser cannot catch (maps to exit code 2).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out = ".";
};

// Creates --out (and parents) if missing.
void ensure_out_dir(const std::string& dir);

// `<out>/run.json`: full resolved configuration, no timestamps, so reruns of
// the same command produce byte-identical artifacts.
void write_run_json(const GlobalOpts& g, const std::string& subcommand,
                    const nlohmann::json& args);

// PANOLOOM_CACHE, when set, roots the intermediate-artifact cache.
std::optional<std::string> cache_root();

// FNV-1a over the given byte strings, hex-encoded; stable cache key.
std::string cache_key(const std::vector<std::string>& parts);

} // namespace panoloom::cli

#endif
