// Copyright 2026 The Hotspot IPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

// Values mirror hs_status in hotspot.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kOutOfBounds = 2,
  kParse = 3,
  kStructure = 4,
  kNumerical = 5,
  kPlannerStuck = 6,
  kConfig = 7,
  kIo = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Warnings go to stderr when HOTSPOT_IPP_LOG is set; otherwise dropped.
void log_warning(const std::string& message);

}  // namespace hotspot
