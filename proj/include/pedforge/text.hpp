// Copyright 2026 The pedforge Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pedforge::text {

bool is_space(char c);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_words(std::string_view s);
bool contains_icase(std::string_view haystack, std::string_view needle);

// FNV-1a, 64 bit. Stable across platforms; used wherever output must be a
// pure function of its input text.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0);

}  // namespace pedforge::text
