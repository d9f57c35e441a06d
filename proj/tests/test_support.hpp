// Shared helpers for the levyzero test suites.
#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "levyzero/errors.hpp"

namespace levyzero {

// Catch2 matcher asserting that a thrown Error carries a specific code.
class ErrorMatcher : public Catch::Matchers::MatcherBase<Error> {
  public:
    explicit ErrorMatcher(ErrorCode code) : code_(code) {}

    bool match(const Error& e) const override { return e.code() == code_; }

    std::string describe() const override {
        return std::string("has error code ") + error_code_name(code_);
    }

  private:
    ErrorCode code_;
};

}  // namespace levyzero
