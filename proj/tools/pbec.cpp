// pbec — photon-condensate spectra through a spectrometer forward model.
//
//   pbec <solve|spectrum|instrument|resolve|dispersion> --config <path>
//        [--out <path>] [--model open|closed] [--png <path>]
//
// Exit codes: 0 ok, 1 usage error, 2 compute/config error.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pbec/pbec.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-condensate photoluminescence simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, png_path, model_override;
  const char* names[] = {"solve", "spectrum", "instrument", "resolve", "dispersion"};
  const char* briefs[] = {"relax the condensate ground state and write its density grid",
                          "compute the ideal photoluminescence grid",
                          "apply instrument blur and the camera model (CSV + PGM)",
                          "print the spectrometer resolution budget",
                          "extract the ridge dispersion curve"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
    sub->add_option("--config", config_path, "key = value config file")->required();
    sub->add_option("--out", out_path, "output path");
    sub->add_option("--model", model_override, "spectrum model: open|closed");
    if (std::string(names[i]) == "instrument")
      sub->add_option("--png", png_path, "camera image path (binary PGM)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    const pbec::RunConfig cfg = pbec::parse_config(slurp(config_path));
    const auto files = pbec::run_pipeline(cfg, sub, out_path, png_path, model_override);
    for (const std::string& f : files) std::cout << "wrote " << f << "\n";
  } catch (const std::exception& e) {
    std::cerr << "pbec: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
