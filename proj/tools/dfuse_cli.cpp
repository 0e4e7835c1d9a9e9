#include <CLI11.hpp>
#include <iostream>

#include "dfuse/humanoid.h"
#include "dfuse/model_io.h"

int main(int argc, char** argv) {
  CLI::App app{"dfuse: depth-stream surface fusion with an articulated inner body"};
  app.require_subcommand(1);

  auto* make_model = app.add_subcommand("make-model", "write the built-in humanoid model");
  std::string model_out;
  make_model->add_option("--out", model_out, "output model file (.bin or .json)")->required();

  CLI11_PARSE(app, argc, argv);

  if (make_model->parsed()) {
    dfuse::save_model(dfuse::make_humanoid(), model_out);
    std::cout << "wrote " << model_out << "\n";
  }
  return 0;
}
