#include <iostream>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cerr << "polypart: cli not wired yet\n";
  return 2;
}
