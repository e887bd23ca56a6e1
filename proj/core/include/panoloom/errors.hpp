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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace panoloom {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside an operation's domain (bad ranges, shape mismatches).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Data failed a curation/consistency check (e.g. non-uniform velocity).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// A trajectory step has zero length; flow direction would be undefined.
class DegenerateStepError : public ValidationError {
public:
    explicit DegenerateStepError(const std::string& what) : ValidationError(what) {}
};

// Grid routing failed; carries the pair of waypoints that could not be joined.
class RoutingError : public Error {
public:
    RoutingError(const std::string& what, int from_index, int to_index)
        : Error(what), from_waypoint(from_index), to_waypoint(to_index) {}
    int from_waypoint = -1;
    int to_waypoint = -1;
};

// Gravity alignment could not estimate an up direction.
class AlignmentError : public ValidationError {
public:
    explicit AlignmentError(const std::string& what) : ValidationError(what) {}
};

// Malformed input file; byte_offset points at the offending location.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (byte offset " + std::to_string(offset) + ")"), byte_offset(offset) {}
    std::size_t byte_offset = 0;
};

// Numerical routine failed (e.g. eigendecomposition did not converge).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

} // namespace panoloom
