#include <iostream>
#include "symext/reduction.hpp"
int main() { std::cout << symext::catalog(5, 3).search_dimension() << "\n"; }
