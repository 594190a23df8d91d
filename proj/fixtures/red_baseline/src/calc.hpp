#pragma once

#include <stdexcept>
#include <string>

struct DivideByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int checked_div(int a, int b);
int div_or_zero(int a, int b);
