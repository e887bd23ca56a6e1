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

#include "run_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include <panoloom/reports.hpp>

namespace panoloom::cli {

void ensure_out_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

void write_run_json(const GlobalOpts& g, const std::string& subcommand,
                    const nlohmann::json& args) {
    nlohmann::json doc;
    doc["tool"] = "panoloom";
    doc["subcommand"] = subcommand;
    doc["seed"] = g.seed;
    doc["threads"] = g.threads;
    doc["out"] = g.out;
    doc["args"] = args;
    reports::write_json(doc, (std::filesystem::path(g.out) / "run.json").string());
}

std::optional<std::string> cache_root() {
    const char* env = std::getenv("PANOLOOM_CACHE");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::string(env);
}

std::string cache_key(const std::vector<std::string>& parts) {
    std::uint64_t h = 1469598103934665603ull; // FNV offset basis
    for (const std::string& part : parts) {
        for (unsigned char c : part) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff; // separator so {"ab","c"} != {"a","bc"}
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace panoloom::cli
