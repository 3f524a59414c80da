#pragma once

#include <initializer_list>
#include <vector>

#include "fluct/increments.hpp"

namespace testing {

inline fluct::WalkPath path(std::initializer_list<double> v) { return fluct::WalkPath(std::vector<double>(v)); }

template <class T>
std::vector<T> vec(std::initializer_list<T> v) {
  return std::vector<T>(v);
}

}  // namespace testing
