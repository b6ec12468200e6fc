#pragma once

#include <functional>

#include "doctest.h"
#include "fastwdm/error.hpp"
#include "fastwdm/scenario.hpp"

namespace fastwdm::test {

inline ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

inline Scenario bundled(const char* name) { return load_scenario(bundled_scenario_dir() / name); }

}  // namespace fastwdm::test

#define CHECK_CODE(expr, ec) CHECK(::fastwdm::test::code_of([&] { (void)(expr); }) == (ec))
