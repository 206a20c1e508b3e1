// Copyright 2026 The Titan Authors
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

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "titan/common.hpp"

namespace titan {

/// Rejects unknown keys so config typos never turn into silent defaults.
inline void check_keys(const nlohmann::json& j,
                       const std::vector<const char*>& allowed,
                       const std::string& context) {
    if (!j.is_object()) throw_config(context + ": expected a JSON object");
    std::set<std::string> ok;
    for (const char* k : allowed) ok.insert(k);
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) {
            throw_config(context + ": unknown key '" + item.key() + "'");
        }
    }
}

inline void check_keys(const nlohmann::json& j,
                       std::initializer_list<const char*> allowed,
                       const std::string& context) {
    check_keys(j, std::vector<const char*>(allowed), context);
}

inline nlohmann::json parse_json(const std::string& text,
                                 const std::string& context) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw_config(context + ": " + e.what());
    }
}

inline std::string slurp_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw_config("cannot open file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot write file: " + path);
    f << content;
    if (!f.good()) throw Error(ErrorKind::Io, "short write: " + path);
}

} // namespace titan
