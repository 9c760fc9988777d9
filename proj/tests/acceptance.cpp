#include <algmix/acceptance.hpp>

int main() {
  auto results = algmix::acceptance::run_all(algmix::cli::default_threads(), &std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? 0 : 1;
}
