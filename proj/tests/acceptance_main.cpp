#include <iostream>

#include "fastwdm/acceptance.hpp"
#include "fastwdm/error.hpp"
#include "fastwdm/scenario.hpp"

int main(int argc, char** argv) {
  fastwdm::AcceptanceOptions o;
  o.scenario_dir = argc > 1 ? std::filesystem::path(argv[1]) : fastwdm::bundled_scenario_dir();
  try {
    const auto results = fastwdm::run_acceptance(o);
    std::cout << fastwdm::render_results(results);
    for (const auto& r : results)
      if (!r.pass) return 1;
    return 0;
  } catch (const fastwdm::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
