#include <iostream>

#include "affasym/acceptance.hpp"

int main() { return affasym::run_acceptance(std::cout) == 0 ? 0 : 1; }
