// Copyright 2026 The organdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ORGANDET_ERRORS_H_
#define ORGANDET_ERRORS_H_

#include <stdexcept>
#include <string>

namespace organdet {

// Malformed input document. `source()` names the file or stream.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, const std::string& reason)
      : std::runtime_error(source.empty() ? reason : source + ": " + reason),
        source_(std::move(source)) {}

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optimistic-concurrency failure: the caller's view of the data is stale.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace organdet

#endif  // ORGANDET_ERRORS_H_
