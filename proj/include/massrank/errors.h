// Copyright 2026 The massrank Authors.
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

#ifndef MASSRANK_ERRORS_H_
#define MASSRANK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace massrank {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorCategory { kUsage, kValidation, kAdapter };

// Base of every error thrown by the library. `kind()` is the stable class
// name printed in machine-parseable diagnostics.
class Error : public std::runtime_error {
 public:
  Error(const char* kind, ErrorCategory category, const std::string& message)
      : std::runtime_error(message), kind_(kind), category_(category) {}

  const char* kind() const { return kind_; }
  ErrorCategory category() const { return category_; }

  // Throws an error of the same class with `prefix` prepended to the message.
  [[noreturn]] virtual void RethrowWithPrefix(const std::string& prefix) const = 0;

 private:
  const char* kind_;
  ErrorCategory category_;
};

#define MASSRANK_DEFINE_ERROR(Name, Category)                 \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& message)                 \
        : Error(#Name, ErrorCategory::Category, message) {}   \
    [[noreturn]] void RethrowWithPrefix(                      \
        const std::string& prefix) const override {           \
      throw Name(prefix + what());                            \
    }                                                         \
  }

MASSRANK_DEFINE_ERROR(UsageError, kUsage);

MASSRANK_DEFINE_ERROR(DimensionError, kValidation);
MASSRANK_DEFINE_ERROR(DegenerateVectorError, kValidation);
MASSRANK_DEFINE_ERROR(InvalidInputError, kValidation);
MASSRANK_DEFINE_ERROR(EmptySequenceError, kValidation);
MASSRANK_DEFINE_ERROR(AlignmentError, kValidation);
MASSRANK_DEFINE_ERROR(MissingEntryError, kValidation);
MASSRANK_DEFINE_ERROR(EmptySampleError, kValidation);
MASSRANK_DEFINE_ERROR(WeightError, kValidation);
MASSRANK_DEFINE_ERROR(ModelDomainError, kValidation);
MASSRANK_DEFINE_ERROR(ConstructionError, kValidation);
MASSRANK_DEFINE_ERROR(EmptyDatasetError, kValidation);
MASSRANK_DEFINE_ERROR(ParseError, kValidation);
MASSRANK_DEFINE_ERROR(DuplicateKeyError, kValidation);
MASSRANK_DEFINE_ERROR(ReservedIdError, kValidation);
MASSRANK_DEFINE_ERROR(LexiconError, kValidation);
MASSRANK_DEFINE_ERROR(IoError, kValidation);

MASSRANK_DEFINE_ERROR(AdapterProtocolError, kAdapter);
MASSRANK_DEFINE_ERROR(AdapterTimeoutError, kAdapter);

#undef MASSRANK_DEFINE_ERROR

}  // namespace massrank

#endif  // MASSRANK_ERRORS_H_
