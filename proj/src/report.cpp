#include "cckit/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "cckit/builtins.hpp"
#include "cckit/classify.hpp"
#include "cckit/geometry_io.hpp"
#include "cckit/peak.hpp"
#include "cckit/shadow.hpp"
#include "cckit/version.hpp"

namespace cckit {

using json = nlohmann::ordered_json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::classify: return "classify";
    case ExperimentKind::cconvex: return "cconvex";
    case ExperimentKind::peak: return "peak";
    case ExperimentKind::shadow: return "shadow";
    case ExperimentKind::theorem4_pipeline: return "theorem4-pipeline";
    case ExperimentKind::theorem5_pipeline: return "theorem5-pipeline";
  }
  return "?";
}

ExperimentKind experiment_kind_from(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::classify, ExperimentKind::cconvex, ExperimentKind::peak,
        ExperimentKind::shadow, ExperimentKind::theorem4_pipeline,
        ExperimentKind::theorem5_pipeline}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown experiment kind: " + name);
}

namespace {

json point_json(const CVec& z) {
  json out = json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j)
    out.push_back({z[j].real(), z[j].imag()});
  return out;
}

json complex_json(const Complex& c) { return {c.real(), c.imag()}; }

json tri_json(const TriResult& t) {
  json out;
  out["verdict"] = to_string(t.verdict);
  if (t.witness) out["witness"] = point_json(*t.witness);
  out["touch_tol"] = t.tol;
  out["detail"] = t.detail;
  return out;
}

json normality_json(const NormalityResult& r) {
  json out;
  out["verdict"] = to_string(r.verdict);
  out["u_radius"] = r.u_radius;
  out["v_radius"] = r.v_radius;
  out["resolution"] = r.resolution;
  out["detail"] = r.detail;
  return out;
}

json line_json(const ComplexLine& l) {
  json out;
  out["base"] = point_json(l.base);
  out["dir"] = point_json(l.dir);
  return out;
}

json topology_json(const TopologyReport& t) {
  json out;
  out["components"] = t.component_count;
  out["holes"] = t.hole_count;
  out["connected"] = t.connected;
  out["simply_connected"] = t.simply_connected;
  out["true_cells"] = t.true_cells;
  return out;
}

std::string trace_csv(const std::vector<double>& trace) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k) os << ";";
    os << k << "," << trace[k];
  }
  return os.str();
}

struct Counts {
  int pass = 0, fail = 0, vacuous = 0;
};

void count_verdict(Counts& c, Verdict v) {
  if (v == Verdict::pass)
    ++c.pass;
  else if (v == Verdict::fail)
    ++c.fail;
  else
    ++c.vacuous;
}

int effective(int requested, int fallback) { return requested > 0 ? requested : fallback; }

// ---------------------------------------------------------------------------

void run_classify(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
                  const SolverSettings& st, Counts& counts) {
  const int samples = effective(cfg.samples, 20);
  std::vector<CVec> pts;
  if (cfg.point)
    pts.push_back(*cfg.point);
  else
    pts = sample_boundary(d, samples, st.seed);

  for (const CVec& p : pts) {
    BoundaryClassification c = classify_point(d, p, st, cfg.radius);
    json rec;
    rec["type"] = "classification";
    rec["point"] = point_json(p);
    if (c.hyperplane) rec["hyperplane_normal"] = point_json(c.hyperplane->normal);
    rec["supported"] = tri_json(c.supported);
    rec["extreme"] = tri_json(c.extreme);
    rec["strict"] = tri_json(c.strict);
    rec["normal"] = normality_json(c.normal);
    rec["strongly_normal"] = normality_json(c.strongly_normal);
    rec["grid"] = c.grid;
    rec["seed"] = st.seed;
    const Verdict flags[] = {c.supported.verdict, c.extreme.verdict, c.strict.verdict,
                             c.normal.verdict, c.strongly_normal.verdict};
    bool any_fail = false, all_na = true;
    for (Verdict v : flags) {
      any_fail = any_fail || v == Verdict::fail;
      all_na = all_na && v == Verdict::not_applicable;
    }
    const Verdict rec_verdict =
        any_fail ? Verdict::fail : (all_na ? Verdict::not_applicable : Verdict::pass);
    rec["verdict"] = to_string(rec_verdict);
    count_verdict(counts, rec_verdict);
    rep.records.push_back(std::move(rec));
  }
}

void run_cconvex(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
                 const SolverSettings& st, Counts& counts) {
  const int lines = effective(cfg.samples, 500);
  const int res = effective(cfg.resolution, st.resolution);
  const CConvexityResult r = cconvexity_check(d, lines, st.seed, res);
  json rec;
  rec["type"] = "cconvexity";
  rec["verdict"] = to_string(r.verdict);
  rec["lines_checked"] = r.lines_checked;
  rec["suppressed"] = r.suppressed;
  rec["resolution"] = res;
  rec["witness_count"] = static_cast<int>(r.witnesses.size());
  count_verdict(counts, r.verdict);
  rep.records.push_back(std::move(rec));
  for (const SliceWitness& w : r.witnesses) {
    json wrec;
    wrec["type"] = "cconvexity_witness";
    wrec["line"] = line_json(w.line);
    wrec["targeted"] = w.targeted;
    wrec["base_topology"] = topology_json(w.base);
    wrec["refined_topology"] = topology_json(w.refined);
    counts.fail += 1;
    rep.records.push_back(std::move(wrec));
  }
  if (!r.witnesses.empty()) {
    const SliceMask mask = slice_mask(d, r.witnesses.front().line, res);
    rep.geometry.masks.emplace_back("witness_slice", mask);
  }
}

void run_peak(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
              const SolverSettings& st, Counts& counts) {
  const CVec p = cfg.point ? *cfg.point
                           : boundary_project(d, CVec::Unit(d.dim, 0));
  PeakBuildOptions opts;
  opts.seed = st.seed;
  opts.touch_tol = st.touch_tol;
  const PeakFunctionSpec spec = build_peak_function(d, p, std::nullopt, std::nullopt, opts);

  json srec;
  srec["type"] = "peak_spec";
  srec["p"] = point_json(spec.p);
  srec["hyperplane_normal"] = point_json(spec.hyperplane.normal);
  srec["direction"] = point_json(spec.line.dir);
  srec["transversality"] = complex_json(spec.transversality);
  srec["delta"] = spec.diameter_bound;
  srec["branch_dir"] = complex_json(spec.branch_dir);
  rep.records.push_back(std::move(srec));

  const int samples = effective(cfg.samples, 10000);
  const PeakVerification v =
      verify_peak(d, spec, {0.1, 0.2, 0.4}, samples, st.seed);
  json vrec;
  vrec["type"] = "peak_verification";
  vrec["verdict"] = to_string(v.verdict);
  json margins = json::array();
  for (const auto& m : v.margins)
    margins.push_back({{"radius", m.radius},
                       {"max_modulus", m.max_modulus},
                       {"margin", m.margin}});
  vrec["margins"] = margins;
  vrec["interior_violations"] = v.interior_violations;
  vrec["branch_violations"] = v.branch_violations;
  vrec["samples"] = v.samples_used;
  vrec["limit_trace"] = trace_csv(v.limit_trace);
  vrec["limit_dominates"] = v.limit_dominates;
  count_verdict(counts, v.verdict);
  rep.records.push_back(std::move(vrec));

  const AdPeakVerification a = verify_ad_peak(d, spec, samples / 4 + 32, st.seed + 1);
  json arec;
  arec["type"] = "ad_peak_verification";
  arec["verdict"] = to_string(a.verdict);
  json bins = json::array();
  for (const auto& b : a.bins)
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"max_modulus", b.max_modulus},
                    {"count", b.count}});
  arec["bins"] = bins;
  arec["branch_violations"] = a.branch_violations;
  arec["samples"] = a.samples_used;
  arec["limit_value"] = a.limit_value;
  count_verdict(counts, a.verdict);
  rep.records.push_back(std::move(arec));
}

json tangent_stats_json(const ShadowModel& s, const std::vector<CVec>& pts) {
  double max_fiber = 0.0, max_dev = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const CVec& z : pts) {
    const TangentCompatReport t = tangent_compat(s, z);
    max_fiber = std::max(max_fiber, t.fiber_grad_norm);
    max_dev = std::max(max_dev, t.zgrad_dev);
    min_eig = std::min(min_eig, t.fiber_block_min_eig);
  }
  json rec;
  rec["type"] = "tangent_compat";
  rec["points"] = static_cast<int>(pts.size());
  rec["max_fiber_grad_norm"] = max_fiber;
  rec["max_zgrad_dev"] = max_dev;
  rec["min_fiber_block_eig"] = min_eig;
  rec["verdict"] = to_string((max_dev <= 1e-6 && min_eig > 0) ? Verdict::pass
                                                              : Verdict::fail);
  return rec;
}

// JSON numbers cannot express the +inf margins of vacuous planar cases.
json finite_or_tag(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

json shadow_slc_json(const ShadowSlcReport& r) {
  json rec;
  rec["type"] = "shadow_slc";
  rec["verdict"] = to_string(r.verdict);
  rec["vacuous"] = r.vacuous;
  rec["source_margin"] = finite_or_tag(r.source_margin);
  rec["shadow_margin"] = finite_or_tag(r.shadow_margin);
  rec["x0_margin"] = finite_or_tag(r.x0_margin);
  rec["samples"] = r.samples;
  return rec;
}

void shadow_geometry(Report& rep, const ShadowModel& s, int resolution) {
  if (s.base_dim != 1) return;
  const DomainModel sd = shadow_domain(s);
  // Defining-function field over the base chart.
  const double r = sd.bounding_radius;
  std::vector<std::array<double, 3>> rows;
  const int fr = 41;
  for (int iy = 0; iy < fr; ++iy) {
    for (int ix = 0; ix < fr; ++ix) {
      const double x = sd.basepoint[0].real() - r + 2.0 * r * ix / (fr - 1);
      const double y = sd.basepoint[0].imag() - r + 2.0 * r * iy / (fr - 1);
      const CVec z = CVec::Constant(1, Complex(x, y));
      rows.push_back({x, y, sd.defining->value(z)});
    }
  }
  rep.geometry.fields.emplace_back("shadow_rho", rows);

  const ComplexLine chart(sd.basepoint, CVec::Constant(1, Complex(1.0, 0.0)));
  const SliceMask mask = slice_mask(sd, chart, std::min(resolution, 128));
  rep.geometry.masks.emplace_back("shadow_chart", mask);
  const auto contours = mask_contours(mask);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < contours.size(); ++i)
    if (contours[i].size() > contours[longest].size()) longest = i;
  if (!contours.empty()) {
    std::vector<Complex> boundary;
    for (const Complex& zeta : contours[longest])
      boundary.push_back(chart.at(zeta)[0]);
    rep.geometry.polylines.emplace_back("shadow_boundary", boundary);
  }
}

void run_shadow(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
                const SolverSettings& st, Counts& counts) {
  if (d.dim < 2) throw Error("shadow experiment needs a source in C^2 or higher");
  const ShadowModel s = make_shadow(d, d.dim - 1, 1, st);
  const int samples = effective(cfg.samples, 200);
  const ShadowSlcReport slc = shadow_slc_verify(s, samples, st.seed);
  count_verdict(counts, slc.vacuous ? Verdict::not_applicable : slc.verdict);
  rep.records.push_back(shadow_slc_json(slc));

  const DomainModel sd = shadow_domain(s);
  const std::vector<CVec> pts = sample_boundary(sd, std::min(20, samples), st.seed + 1);
  json trec = tangent_stats_json(s, pts);
  count_verdict(counts, trec["verdict"] == "pass" ? Verdict::pass : Verdict::fail);
  rep.records.push_back(std::move(trec));

  shadow_geometry(rep, s, effective(cfg.resolution, 128));
}

void run_theorem4(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
                  const SolverSettings& st, Counts& counts) {
  if (d.dim < 2) throw Error("theorem4-pipeline needs a source in C^2 or higher");
  const int res = effective(cfg.resolution, 128);
  const int samples = effective(cfg.samples, 64);
  const DomainModel mask_dom = shadow_mask(d, 1, d.dim - 1, res, samples, st.seed);

  const CConvexityResult top = cconvexity_check(mask_dom, 1, st.seed, res);
  json trec;
  trec["type"] = "shadow_topology";
  trec["verdict"] = to_string(top.verdict);
  trec["witness_count"] = static_cast<int>(top.witnesses.size());
  count_verdict(counts, top.verdict);
  rep.records.push_back(std::move(trec));

  const double u = cfg.radius > 0 ? cfg.radius : 0.2 * mask_dom.bounding_radius;
  for (const CVec& p : sample_boundary(mask_dom, 10, st.seed + 1)) {
    const NormalityResult nr = normality_test(mask_dom, p, u, std::min(res, 128));
    json rec;
    rec["type"] = "shadow_normality";
    rec["point"] = point_json(p);
    rec["result"] = normality_json(nr);
    count_verdict(counts, nr.verdict);
    rep.records.push_back(std::move(rec));
  }

  const ComplexLine chart(mask_dom.basepoint, CVec::Constant(1, Complex(1.0, 0.0)));
  rep.geometry.masks.emplace_back("shadow_mask", slice_mask(mask_dom, chart, res));
}

void run_theorem5(Report& rep, const DomainModel& d, const ExperimentConfig& cfg,
                  const SolverSettings& st, Counts& counts) {
  if (d.dim < 2) throw Error("theorem5-pipeline needs a source in C^2 or higher");
  const int samples = effective(cfg.samples, 200);
  const ShadowModel s = make_shadow(d, d.dim - 1, 1, st);

  const double c = slc_margin(d, samples, st.seed);
  json crec;
  crec["type"] = "slc_margin";
  crec["value"] = finite_or_tag(c);
  crec["samples"] = samples;
  crec["verdict"] = to_string(c > 0 ? Verdict::pass : Verdict::fail);
  count_verdict(counts, c > 0 ? Verdict::pass : Verdict::fail);
  rep.records.push_back(std::move(crec));

  const ShadowSlcReport slc = shadow_slc_verify(s, samples, st.seed);
  count_verdict(counts, slc.vacuous ? Verdict::not_applicable : slc.verdict);
  rep.records.push_back(shadow_slc_json(slc));

  const DomainModel sd = shadow_domain(s);
  const std::vector<CVec> pts =
      sample_boundary(sd, std::min(100, samples), st.seed + 1);
  json trec = tangent_stats_json(s, pts);
  count_verdict(counts, trec["verdict"] == "pass" ? Verdict::pass : Verdict::fail);
  rep.records.push_back(std::move(trec));

  // Independent curvature check: nested central differences of the composed
  // defining function against the Schur-complement Hessian.
  const int fd_points = std::min(20, static_cast<int>(pts.size()));
  double max_diff = 0.0;
  const double h = 1e-4;
  for (int i = 0; i < fd_points; ++i) {
    const CVec& z = pts[i];
    const ShadowDerivs der = shadow_rho_derivs(s, z);
    const int n2 = 2 * s.base_dim;
    const RVec zr = realify(z);
    auto value_at = [&](RVec x) { return fiber_global_min(s, unrealify(x)).second; };
    for (int k = 0; k < n2; ++k) {
      for (int l = k; l < n2; ++l) {
        RVec xpp = zr, xpm = zr, xmp = zr, xmm = zr;
        xpp[k] += h; xpp[l] += h;
        xpm[k] += h; xpm[l] -= h;
        xmp[k] -= h; xmp[l] += h;
        xmm[k] -= h; xmm[l] -= h;
        const double fd =
            (value_at(xpp) - value_at(xpm) - value_at(xmp) + value_at(xmm)) /
            (4.0 * h * h);
        max_diff = std::max(max_diff, std::abs(fd - der.hess(k, l)));
      }
    }
  }
  json frec;
  frec["type"] = "schur_fd_agreement";
  frec["points"] = fd_points;
  frec["max_abs_diff"] = max_diff;
  frec["fd_step"] = h;
  frec["verdict"] = to_string(max_diff <= 1e-4 ? Verdict::pass : Verdict::fail);
  count_verdict(counts, max_diff <= 1e-4 ? Verdict::pass : Verdict::fail);
  rep.records.push_back(std::move(frec));

  shadow_geometry(rep, s, effective(cfg.resolution, 128));
}

}  // namespace

DomainModel resolve_domain(const std::string& arg) {
  if (arg.find('/') != std::string::npos ||
      (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json"))
    return load_domain_spec(arg);
  const auto colon = arg.find(':');
  const std::string name = arg.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::istringstream is(arg.substr(colon + 1));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        params.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw Error("bad numeric parameter in domain argument: " + arg);
      }
    }
  }
  return make_builtin(name, params);
}

Report run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  json cfg;
  cfg["kind"] = to_string(config.kind);
  cfg["domain"] = config.domain_arg;
  cfg["seed"] = config.settings.seed;
  cfg["out"] = config.out_dir;
  cfg["samples"] = config.samples;
  cfg["resolution"] = config.resolution;
  if (config.point) cfg["point"] = point_json(*config.point);
  cfg["radius"] = config.radius;
  rep.config = cfg;

  const DomainModel d = resolve_domain(config.domain_arg);
  SolverSettings st = config.settings;
  if (config.resolution > 0) st.resolution = config.resolution;
  st.validate();

  Counts counts;
  switch (config.kind) {
    case ExperimentKind::classify: run_classify(rep, d, config, st, counts); break;
    case ExperimentKind::cconvex: run_cconvex(rep, d, config, st, counts); break;
    case ExperimentKind::peak: run_peak(rep, d, config, st, counts); break;
    case ExperimentKind::shadow: run_shadow(rep, d, config, st, counts); break;
    case ExperimentKind::theorem4_pipeline:
      run_theorem4(rep, d, config, st, counts);
      break;
    case ExperimentKind::theorem5_pipeline:
      run_theorem5(rep, d, config, st, counts);
      break;
  }
  rep.pass = counts.pass;
  rep.fail = counts.fail;
  rep.vacuous = counts.vacuous;
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

json Report::to_json(bool with_timestamp) const {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["tool_version"] = kVersion;
  out["config"] = config;
  out["records"] = records;
  out["summary"] = {{"pass", pass}, {"fail", fail}, {"vacuous", vacuous}};
  if (with_timestamp) {
    char buf[32] = {};
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    out["timestamp"] = {{"iso", buf}, {"elapsed_ms", elapsed_ms}};
  }
  return out;
}

int emit_report(const Report& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file_atomic(out_dir + "/report.json", report.to_json().dump(2) + "\n");

  auto quoted = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream csv;
  csv << "key,value\n";
  csv << "kind," << quoted(report.config.value("kind", "")) << "\n";
  csv << "domain," << quoted(report.config.value("domain", "")) << "\n";
  csv << "seed," << report.config.value("seed", 0ull) << "\n";
  csv << "pass," << report.pass << "\n";
  csv << "fail," << report.fail << "\n";
  csv << "vacuous," << report.vacuous << "\n";
  write_file_atomic(out_dir + "/summary.csv", csv.str());
  return report.fail > 0 ? 2 : 0;
}

void emit_geometry(const GeometryBundle& bundle, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, mask] : bundle.masks) {
    write_pgm(mask, out_dir + "/" + name + ".pgm");
    write_contours_svg(mask, mask_contours(mask), out_dir + "/" + name + ".svg");
  }
  for (const auto& [name, line] : bundle.polylines)
    write_polyline_csv(line, out_dir + "/" + name + ".csv");
  for (const auto& [name, rows] : bundle.fields)
    write_field_csv(rows, out_dir + "/" + name + ".csv");
}

}  // namespace cckit
