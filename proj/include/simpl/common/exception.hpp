// Copyright 2026 The SIMPL Authors
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

#ifndef SIMPL__COMMON__EXCEPTION_HPP_
#define SIMPL__COMMON__EXCEPTION_HPP_

#include <stdexcept>
#include <string>

namespace simpl
{
/**
 * @brief Error categories. The numeric value of each category is the process exit code used by
 * the command line tool.
 */
enum class SimplError_t : int {
  InvalidInput = 2,    //!< Malformed scene, bad configuration, shape mismatch.
  NumericFailure = 3,  //!< Non-finite value or rank-deficient system.
  IoError = 4,         //!< Missing, unreadable or corrupt file.
};

inline const char * to_string(SimplError_t kind) noexcept
{
  switch (kind) {
    case SimplError_t::InvalidInput:
      return "[InvalidInput]";
    case SimplError_t::NumericFailure:
      return "[NumericFailure]";
    case SimplError_t::IoError:
      return "[IoError]";
  }
  return "[Unknown]";
}

class SimplException : public std::runtime_error
{
public:
  SimplException(SimplError_t kind, const std::string & msg)
  : std::runtime_error(std::string(to_string(kind)) + " " + msg), kind_(kind)
  {
  }

  SimplError_t kind() const noexcept { return kind_; }

  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  SimplError_t kind_;
};

/**
 * @brief Throw an `InvalidInput` exception if `condition` is false.
 */
inline void expect(bool condition, const std::string & msg)
{
  if (!condition) {
    throw SimplException(SimplError_t::InvalidInput, msg);
  }
}
}  // namespace simpl
#endif  // SIMPL__COMMON__EXCEPTION_HPP_
