#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <sstream>
#include <string>

#include "cckit/report.hpp"

namespace {

cckit::CVec parse_point(const std::string& text) {
  std::vector<cckit::Complex> coords;
  std::istringstream pairs(text);
  std::string pair;
  while (std::getline(pairs, pair, ';')) {
    std::istringstream is(pair);
    std::string re, im;
    if (!std::getline(is, re, ',') || !std::getline(is, im))
      throw cckit::Error("--point expects \"re,im;re,im;...\"");
    coords.emplace_back(std::stod(re), std::stod(im));
  }
  if (coords.empty()) throw cckit::Error("--point is empty");
  cckit::CVec z(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t j = 0; j < coords.size(); ++j)
    z[static_cast<Eigen::Index>(j)] = coords[j];
  return z;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cckit — complex-convexity analysis experiments"};

  std::string kind_name, domain, out_dir = "out", point_text;
  std::uint64_t seed = 0;
  int samples = 0, resolution = 0;
  double radius = 0.0;

  app.add_option("kind", kind_name,
                 "experiment kind: classify | cconvex | peak | shadow | "
                 "theorem4-pipeline | theorem5-pipeline")
      ->required();
  app.add_option("--domain", domain,
                 "builtin name (e.g. ball:3, ellipsoid:0.25,1, perturbed_ball:3,0.1, "
                 "slit_disc, bidisc) or a JSON domain file")
      ->required();
  app.add_option("--seed", seed, "RNG seed (default 0)");
  app.add_option("--out", out_dir, "output directory (default ./out)");
  app.add_option("--samples", samples, "sample/line budget (0 = kind default)");
  app.add_option("--resolution", resolution, "grid resolution (0 = kind default)");
  app.add_option("--point", point_text, "boundary point \"re,im;re,im;...\"");
  app.add_option("--radius", radius, "neighborhood radius for normality checks");

  CLI11_PARSE(app, argc, argv);

  try {
    cckit::ExperimentConfig cfg;
    cfg.kind = cckit::experiment_kind_from(kind_name);
    cfg.domain_arg = domain;
    cfg.out_dir = out_dir;
    cfg.settings.seed = seed;
    cfg.samples = samples;
    cfg.resolution = resolution;
    cfg.radius = radius;
    if (!point_text.empty()) cfg.point = parse_point(point_text);

    const cckit::Report report = cckit::run_experiment(cfg);
    cckit::emit_geometry(report.geometry, cfg.out_dir);
    const int code = cckit::emit_report(report, cfg.out_dir);
    std::printf("%s %s: pass=%d fail=%d vacuous=%d (%.0f ms) -> %s\n",
                kind_name.c_str(), domain.c_str(), report.pass, report.fail,
                report.vacuous, report.elapsed_ms, cfg.out_dir.c_str());
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cckit: error: %s\n", e.what());
    return 1;
  }
}
