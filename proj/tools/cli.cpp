#include "cli.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "raycut/error.hpp"
#include "raycut/eval.hpp"
#include "raycut/maxflow.hpp"
#include "raycut/nrrd.hpp"
#include "raycut/phantom.hpp"
#include "raycut/pipeline.hpp"
#include "raycut/service.hpp"

namespace raycut::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::optional<std::array<double, 3>> parse_triple(const std::string& text) {
  std::array<double, 3> v{};
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  for (double& x : v) {
    if (!(in >> x)) return std::nullopt;
  }
  std::string rest;
  if (in >> rest) return std::nullopt;
  return v;
}

// Validator for "a,b,c" option values.
const CLI::Validator kTriple(
    [](std::string& value) -> std::string {
      return parse_triple(value) ? std::string() : "expected three comma-separated numbers";
    },
    "X,Y,Z");

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct SegmentArgs {
  std::string input;
  std::string seed;
  bool seed_mm = false;
  SegParams params;
  std::string cost_model = "region";
  std::optional<double> region_threshold;
  std::string out_mask;
  std::string out_mesh;
  std::string dump_dimacs;
  bool json = false;
};

int cmd_segment(const SegmentArgs& a, std::ostream& out) {
  SegParams params = a.params;
  params.cost_model = *parse_cost_model(a.cost_model);
  params.region_threshold = a.region_threshold;

  const Volume vol = read_nrrd(a.input);
  const Seed seed{to_vec(*parse_triple(a.seed)), a.seed_mm};
  SegGraph graph;
  const SegmentationResult res =
      run_segmentation(vol, seed, params, a.dump_dimacs.empty() ? nullptr : &graph);

  write_nrrd_mask(res.mask, a.out_mask);
  if (!a.out_mesh.empty()) export_obj(res.mesh, a.out_mesh);
  if (!a.dump_dimacs.empty()) {
    std::ofstream dimacs(a.dump_dimacs);
    if (!dimacs) throw Error(Errc::kIo, "cannot open '" + a.dump_dimacs + "' for writing");
    write_dimacs(graph, dimacs);
    if (!dimacs) throw Error(Errc::kIo, "failed writing '" + a.dump_dimacs + "'");
  }

  const double vol_mm3 = res.volume_mm3();
  const PhaseTimings& t = res.timings;
  if (a.json) {
    ordered_json j = {
        {"seed_voxel", {res.seed_voxel.i, res.seed_voxel.j, res.seed_voxel.k}},
        {"seed_mm", {res.seed_mm.x, res.seed_mm.y, res.seed_mm.z}},
        {"rays", res.rays.rays},
        {"samples", res.rays.samples},
        {"delta_mm", res.rays.delta_mm},
        {"delta_r", params.delta_r},
        {"cost_model", std::string(to_string(params.cost_model))},
        {"mu", res.mu},
        {"threshold", res.threshold},
        {"nodes", res.node_count},
        {"arcs", res.arc_count},
        {"flow", res.cut.flow_value},
        {"phase_ms",
         {{"rays", t.rays_ms},
          {"graph", t.graph_ms},
          {"mincut", t.mincut_ms},
          {"voxelize", t.voxelize_ms}}},
        {"total_ms", t.total_ms},
        {"mask_voxels", res.mask.count()},
        {"volume_mm3", vol_mm3},
        {"volume_cm3", vol_mm3 / 1000.0},
        {"boundary_min", res.boundary_min()},
        {"boundary_max", res.boundary_max()},
        {"boundary", res.cut.boundary},
    };
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "seed voxel (" << res.seed_voxel.i << "," << res.seed_voxel.j << ","
      << res.seed_voxel.k << ")  world (" << fixed(res.seed_mm.x, 3) << ", "
      << fixed(res.seed_mm.y, 3) << ", " << fixed(res.seed_mm.z, 3) << ") mm\n";
  out << "template: " << res.rays.rays << " rays x " << res.rays.samples << " samples (step "
      << fixed(res.rays.delta_mm, 4) << " mm), delta_r " << params.delta_r << ", cost model "
      << to_string(params.cost_model);
  if (params.cost_model == CostModel::kRegion) out << " (threshold " << fixed(res.threshold, 3) << ")";
  out << "\nmean intensity at seed: " << fixed(res.mu, 3) << "\n";
  out << "graph: " << res.node_count << " nodes, " << res.arc_count << " arcs, max flow "
      << fixed(res.cut.flow_value, 3) << "\n";
  out << "timing [ms]: rays " << fixed(t.rays_ms, 1) << "  graph " << fixed(t.graph_ms, 1)
      << "  mincut " << fixed(t.mincut_ms, 1) << "  voxelize " << fixed(t.voxelize_ms, 1)
      << "  total " << fixed(t.total_ms, 1) << "\n";
  out << "boundary index: min " << res.boundary_min() << " max " << res.boundary_max();
  if (res.boundary_min() == res.boundary_max()) out << " (sphere)";
  out << "\nmask: " << res.mask.count() << " voxels, " << fixed(vol_mm3, 1) << " mm3 ("
      << fixed(vol_mm3 / 1000.0, 3) << " cm3)\n";
  return kExitOk;
}

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string id = "case";
  std::string manifest;
  bool json = false;
};

std::vector<CaseRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open manifest '" + path + "'");
  const fs::path dir = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path fp(p);
    return fp.is_absolute() ? fp : dir / fp;
  };
  std::vector<CaseRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id, pred, truth, extra;
    if (!(ls >> id)) continue;
    if (!(ls >> pred >> truth) || (ls >> extra)) {
      throw Error(Errc::kInvalidArgument, "manifest line " + std::to_string(line_no) +
                                              ": expected '<id> <pred> <truth>'");
    }
    rows.push_back(case_report(read_nrrd_mask(resolve(pred)), read_nrrd_mask(resolve(truth)), id));
  }
  if (rows.empty()) throw Error(Errc::kEmptyInput, "manifest lists no cases");
  return rows;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  std::vector<CaseRow> rows;
  if (!a.manifest.empty()) {
    rows = read_manifest(a.manifest);
  } else {
    rows.push_back(case_report(read_nrrd_mask(a.pred), read_nrrd_mask(a.truth), a.id));
  }
  std::optional<SummaryRow> summary;
  if (!a.manifest.empty()) summary = summarize(rows);
  if (a.json) {
    out << report_json(rows, summary ? &*summary : nullptr) << '\n';
  } else {
    print_report(out, rows, summary ? &*summary : nullptr);
  }
  return kExitOk;
}

struct PhantomArgs {
  std::string kind = "sphere";
  std::string out;
  std::string truth_out;
  std::string dims;
  std::string spacing;
  std::string semi_axes;
  std::optional<double> radius;
  std::string offset;
  std::optional<double> inside;
  std::optional<double> outside;
  double noise = 0.0;
  std::uint64_t rng_seed = 0;
};

int cmd_phantom(const PhantomArgs& a, std::ostream& out) {
  PhantomSpec spec = PhantomSpec::defaults(*parse_phantom_kind(a.kind));
  if (!a.dims.empty()) {
    const auto d = *parse_triple(a.dims);
    for (int i = 0; i < 3; ++i) {
      if (d[i] < 1 || d[i] != static_cast<double>(static_cast<std::size_t>(d[i]))) {
        throw Error(Errc::kInvalidArgument, "--dims must be positive integers");
      }
      spec.dims[i] = static_cast<std::size_t>(d[i]);
    }
  }
  if (!a.spacing.empty()) spec.spacing = to_vec(*parse_triple(a.spacing));
  if (a.radius) spec.semi_axes_mm = {*a.radius, *a.radius, *a.radius};
  if (!a.semi_axes.empty()) spec.semi_axes_mm = to_vec(*parse_triple(a.semi_axes));
  if (!a.offset.empty()) spec.offset_mm = to_vec(*parse_triple(a.offset));
  if (a.inside) spec.inside = *a.inside;
  if (a.outside) spec.outside = *a.outside;
  spec.noise_sigma = a.noise;
  spec.rng_seed = a.rng_seed;

  const Phantom ph = make_phantom(spec);
  write_nrrd(ph.image, a.out);
  if (!a.truth_out.empty()) write_nrrd_mask(ph.truth, a.truth_out);

  const Index3 c = nearest_voxel(ph.image.geometry(), ph.center_mm);
  out << "phantom " << a.kind << ": " << spec.dims[0] << "x" << spec.dims[1] << "x"
      << spec.dims[2] << " voxels, object centre voxel (" << c.i << "," << c.j << "," << c.k
      << ")\n";
  out << "analytic volume " << fixed(ellipsoid_volume_mm3(spec.semi_axes_mm), 1)
      << " mm3, truth mask " << ph.truth.count() << " voxels ("
      << fixed(static_cast<double>(ph.truth.count()) * voxel_volume_mm3(ph.truth.geometry()), 1)
      << " mm3)\n";
  return kExitOk;
}

struct ServeArgs {
  std::string input;
  std::string truth;
  std::string host = "127.0.0.1";
  int port = 8080;
};

int cmd_serve(const ServeArgs& a, std::ostream& out) {
  Volume vol = read_nrrd(a.input);
  std::optional<MaskVolume> truth;
  if (!a.truth.empty()) truth = read_nrrd_mask(a.truth);
  SegmentationService service(std::move(vol), std::move(truth));
  HttpServer server(service);
  const int port = server.bind(a.host, a.port);
  if (port < 0) {
    throw Error(Errc::kIo, "cannot bind " + a.host + ":" + std::to_string(a.port));
  }
  out << "listening on http://" << a.host << ":" << port << std::endl;
  server.listen();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seed-driven graph-cut segmentation of roughly convex 3D structures"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Segment a volume from one seed point");
  segment->add_option("--input", seg.input, "Input NRRD volume")->required();
  segment->add_option("--seed", seg.seed, "Seed as voxel indices i,j,k (or mm with --seed-mm)")
      ->required()
      ->check(kTriple);
  segment->add_flag("--seed-mm", seg.seed_mm, "Interpret --seed as world coordinates in mm");
  segment->add_option("--subdiv", seg.params.subdiv, "Icosphere subdivision level")
      ->capture_default_str()
      ->check(CLI::Range(0, kMaxSubdivision));
  segment->add_option("--samples", seg.params.samples, "Samples per ray")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  segment->add_option("--radius-mm", seg.params.max_radius_mm, "Ray length in mm")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  segment->add_option("--delta-r", seg.params.delta_r, "Smoothness constraint between rays")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  segment->add_option("--mean-window", seg.params.mean_window,
                      "Edge length of the voxel window used to estimate the mean")
      ->capture_default_str();
  segment->add_option("--cost-model", seg.cost_model, "Boundary cost: region or intensity")
      ->capture_default_str()
      ->check(CLI::IsMember({"region", "intensity"}));
  segment->add_option("--region-threshold", seg.region_threshold,
                      "Fixed threshold for the region cost (default: Otsu)");
  segment->add_option("--out-mask", seg.out_mask, "Output mask NRRD")->required();
  segment->add_option("--out-mesh", seg.out_mesh, "Optional OBJ mesh output");
  segment->add_option("--dump-dimacs", seg.dump_dimacs, "Write the graph in DIMACS format");
  segment->add_flag("--json", seg.json, "Print the report as JSON");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Compare automatic and manual masks");
  auto* pred_opt = eval->add_option("--pred", ev.pred, "Automatic mask NRRD");
  auto* truth_opt = eval->add_option("--truth", ev.truth, "Manual mask NRRD");
  eval->add_option("--id", ev.id, "Case id for a single comparison")->capture_default_str();
  auto* manifest_opt =
      eval->add_option("--manifest", ev.manifest, "File of '<id> <pred> <truth>' lines");
  eval->add_flag("--json", ev.json, "Print the report as JSON");
  pred_opt->needs(truth_opt);
  truth_opt->needs(pred_opt);
  manifest_opt->excludes(pred_opt)->excludes(truth_opt);

  PhantomArgs ph;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic test volume");
  phantom->add_option("--kind", ph.kind, "sphere, ellipsoid or shifted")
      ->required()
      ->check(CLI::IsMember({"sphere", "ellipsoid", "shifted"}));
  phantom->add_option("--out", ph.out, "Output NRRD")->required();
  phantom->add_option("--truth-out", ph.truth_out, "Optional analytic truth mask NRRD");
  phantom->add_option("--dims", ph.dims, "Grid size nx,ny,nz (default 101,101,101)")
      ->check(kTriple);
  phantom->add_option("--spacing", ph.spacing, "Voxel spacing in mm (default 1,1,1)")
      ->check(kTriple);
  phantom->add_option("--radius", ph.radius, "Sphere radius in mm")->check(CLI::PositiveNumber);
  phantom->add_option("--semi-axes", ph.semi_axes, "Ellipsoid semi-axes a,b,c in mm")
      ->check(kTriple);
  phantom->add_option("--offset", ph.offset, "Object centre offset from grid centre in mm")
      ->check(kTriple);
  phantom->add_option("--inside", ph.inside, "Object intensity (default 200)");
  phantom->add_option("--outside", ph.outside, "Background intensity (default 50)");
  phantom->add_option("--noise", ph.noise, "Gaussian noise sigma")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  phantom->add_option("--rng-seed", ph.rng_seed, "Noise RNG seed")->capture_default_str();

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run the HTTP backend for the viewer");
  serve->add_option("--input", sv.input, "Input NRRD volume")->required();
  serve->add_option("--truth", sv.truth, "Optional manual mask NRRD");
  serve->add_option("--host", sv.host, "Bind address")->capture_default_str();
  serve->add_option("--port", sv.port, "TCP port")->capture_default_str()->check(CLI::Range(0, 65535));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*eval && ev.manifest.empty() && ev.pred.empty()) {
    err << "eval: either --pred/--truth or --manifest is required\n";
    return kExitUsage;
  }

  try {
    if (*segment) return cmd_segment(seg, out);
    if (*eval) return cmd_eval(ev, out);
    if (*phantom) return cmd_phantom(ph, out);
    if (*serve) return cmd_serve(sv, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::kIo ? kExitIo : kExitData;
  }
  return kExitUsage;
}

}  // namespace raycut::cli
