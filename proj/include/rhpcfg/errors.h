// Copyright 2026 The rhpcfg Authors.
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

#ifndef RHPCFG_ERRORS_H_
#define RHPCFG_ERRORS_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace rhpcfg {

// Input data that is well-formed but unusable (bad corpus lines, sentences
// without a derivation, unreadable parameter files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnderivableError : public DataError {
 public:
  explicit UnderivableError(const std::string& what,
                            std::optional<size_t> index = std::nullopt)
      : DataError(index ? what + " (sentence " + std::to_string(*index) + ")"
                        : what),
        index_(index) {}

  std::optional<size_t> index() const { return index_; }

 private:
  std::optional<size_t> index_;
};

}  // namespace rhpcfg

#endif  // RHPCFG_ERRORS_H_
