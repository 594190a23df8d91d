#include "src/calc.hpp"

int checked_div(int a, int b) {
  if (b == 0) throw DivideByZero("division by zero");
  return a / b;
}

int div_or_zero(int a, int b) {
  try {
    return checked_div(a, b);
  } catch (const DivideByZero&) {
    return 0;
  }
}
