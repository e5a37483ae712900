#pragma once

#include <doctest.h>

#include "symuniv/error.hpp"

namespace test {

template <class F>
symuniv::Errc code_of(F&& f) {
  try {
    f();
  } catch (const symuniv::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return symuniv::Errc::io_error;
}

}  // namespace test
