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

#ifndef FEBIAS_ERROR_HPP
#define FEBIAS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace febias {

// Error taxonomy; mirrored one-to-one by the C API status codes.
enum class ErrorKind {
  io = 1,
  parse = 2,
  validation = 3,
  stat = 4,
  invalid_argument = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_io(std::string msg) {
  throw Error(ErrorKind::io, std::move(msg));
}
[[noreturn]] inline void throw_parse(std::string msg) {
  throw Error(ErrorKind::parse, std::move(msg));
}
[[noreturn]] inline void throw_validation(std::string msg) {
  throw Error(ErrorKind::validation, std::move(msg));
}
[[noreturn]] inline void throw_stat(std::string msg) {
  throw Error(ErrorKind::stat, std::move(msg));
}
[[noreturn]] inline void throw_invalid(std::string msg) {
  throw Error(ErrorKind::invalid_argument, std::move(msg));
}

}  // namespace febias

#endif  // FEBIAS_ERROR_HPP
