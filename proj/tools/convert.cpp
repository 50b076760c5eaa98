// Converts raw Jira exports into the issuelens record format.
#include <iostream>

#include "CLI11.hpp"
#include "issuelens/jira_convert.hpp"
#include "issuelens/util.hpp"

int main(int argc, char** argv) {
  CLI::App app{"convert a Jira export to issuelens JSON lines"};
  std::string in, out, tracker;
  app.add_option("input", in, "REST dump, JSON array or newline-delimited documents")->required();
  app.add_option("-o,--out", out, "output .jsonl file")->required();
  app.add_option("-t,--tracker", tracker, "tracker name stamped on every record")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto stats = issuelens::convert_jira_export(in, out, tracker);
    for (const std::string& s : stats.skipped) std::cerr << "skipped " << s << "\n";
    std::cout << stats.converted << " issues converted, " << stats.skipped.size() << " skipped\n";
  } catch (const issuelens::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
