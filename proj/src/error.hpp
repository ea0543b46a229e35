// Copyright 2026 The TAH Authors. All Rights Reserved.
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

#ifndef TAH_ERROR_HPP
#define TAH_ERROR_HPP

#include <stdexcept>
#include <string>

#include "tah/tah.h"

namespace tah {

// Exception carrying the status code the C boundary reports.
class Error : public std::runtime_error {
 public:
  Error(tah_status code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  tah_status code() const { return code_; }

 private:
  tah_status code_;
};

[[noreturn]] inline void fail(tah_status code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tah

#endif  // TAH_ERROR_HPP
