// hodgecurl command line tool: mesh ingestion/generation, Hodge/homology
// pipeline, self-adjoint curl spectra and machine-readable JSON reports.

#include <CLI11.hpp>
#include <hodgecurl/hodgecurl.hpp>

#include <cstdlib>
#include <iostream>

namespace hc = hodgecurl;
using hc::report::Json;

namespace {

struct MeshOptions {
  std::string mesh_file;
  std::string gen;
  int n = 8;
  int refine = -1;
  double radius = 1.0;
  bool symmetric = false;
  double R = 2.0, r = 1.0;
  int nu = 8, nv = 8, nw = 4;
  double lo = -1.0, hi = 1.0;
};

struct RunOptions {
  MeshOptions mesh;
  std::string trace = "closed";
  std::string partition;  // comma separated 1-based indices
  int k = 12;
  double zero_tol = 1e-6;
  std::uint64_t seed = 20080527;
  std::string out;
  bool drop_symplectic_row = false;
  int dense_threshold = 2600;
};

hc::meshgen::RawMesh make_mesh(const MeshOptions& m) {
  if (!m.mesh_file.empty()) return hc::mshio::read_msh_file(m.mesh_file);
  int n = m.refine >= 0 ? 4 * (1 << m.refine) : m.n;
  if (m.gen == "cube") return hc::meshgen::cube(n, m.lo, m.hi, m.symmetric);
  if (m.gen == "ball") return hc::meshgen::ball(m.radius, n, m.symmetric);
  if (m.gen == "solid-torus") return hc::meshgen::solid_torus(m.R, m.r, m.nu, m.nv, m.nw);
  throw CLI::ValidationError("--gen must be one of cube, ball, solid-torus (or use --mesh FILE)");
}

std::vector<int> parse_partition(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw hc::BadPartitionError("invalid character in partition list: " + s);
    }
  }
  return out;
}

Json mesh_section(const hc::OrientedComplex3& C, const hc::SurfaceComplex& S) {
  Json j = Json::object();
  j["vertices"] = static_cast<std::int64_t>(C.n_vertices());
  j["edges"] = static_cast<std::int64_t>(C.n_edges());
  j["faces"] = static_cast<std::int64_t>(C.n_faces());
  j["tets"] = static_cast<std::int64_t>(C.n_tets());
  j["boundary_vertices"] = static_cast<std::int64_t>(S.n_vertices());
  j["boundary_edges"] = static_cast<std::int64_t>(S.n_edges());
  j["boundary_triangles"] = static_cast<std::int64_t>(S.n_triangles());
  j["boundary_euler_characteristic"] = static_cast<std::int64_t>(S.euler_characteristic);
  j["boundary_components"] = static_cast<std::int64_t>(S.n_components);
  j["bbox_scale"] = C.bbox_scale;
  return j;
}

Json check(double value, double tol) {
  Json j = Json::object();
  j["value"] = value;
  j["tolerance"] = tol;
  j["pass"] = (value <= tol);
  return j;
}

struct CheckList {
  Json checks = Json::object();
  bool ok = true;
  void add(const std::string& name, double value, double tol) {
    checks[name] = check(value, tol);
    if (!(value <= tol)) ok = false;
  }
  void add_bool(const std::string& name, bool pass) {
    Json j = Json::object();
    j["pass"] = pass;
    checks[name] = std::move(j);
    if (!pass) ok = false;
  }
};

Json exactness_checks(const hc::OrientedComplex3& C, const hc::SurfaceComplex& S, bool& ok) {
  CheckList cl;
  cl.add("d1_d0_max_abs", static_cast<double>(hc::max_abs(hc::SpMatI(C.d1 * C.d0))), 0.0);
  cl.add("d2_d1_max_abs", static_cast<double>(hc::max_abs(hc::SpMatI(C.d2 * C.d1))), 0.0);
  cl.add("surface_d1_d0_max_abs", static_cast<double>(hc::max_abs(hc::SpMatI(S.d1 * S.d0))), 0.0);
  cl.add("trace_commutation_max_abs",
         static_cast<double>(hc::max_abs(hc::SpMatI(S.T1 * C.d0 - S.d0 * S.T0))), 0.0);
  hc::SpMat C3 = hc::assemble_weak_curl(C);
  hc::SpMat W = hc::wedge_pairing(S);
  double c3norm = hc::inf_norm(C3);
  hc::SpMat T1d = S.T1.cast<double>();
  hc::SpMat green = hc::SpMat(hc::SpMat(C3 - hc::SpMat(C3.transpose())) -
                              hc::SpMat(T1d.transpose() * W * T1d));
  cl.add("green_identity_rel", hc::inf_norm(green) / std::max(c3norm, 1e-300), 1e-12);
  hc::SpMat cd0 = hc::SpMat(C3 * C.d0.cast<double>());
  cl.add("weak_curl_grad_rel", hc::inf_norm(cd0) / std::max(c3norm, 1e-300), 1e-12);
  ok = cl.ok;
  return cl.checks;
}

int run_command(const std::string& cmd, const RunOptions& opt) {
  auto raw = make_mesh(opt.mesh);
  auto C = hc::meshgen::build(raw);
  auto S = hc::extract_boundary(C);

  Json rep = Json::object();
  rep["schema_version"] = "1";
  rep["command"] = cmd;
  rep["mesh"] = mesh_section(C, S);
  rep["seed"] = static_cast<std::int64_t>(opt.seed);

  bool ok = true;
  std::string sidecar_dir;
  if (!opt.out.empty()) {
    auto slash = opt.out.find_last_of('/');
    sidecar_dir = (slash == std::string::npos) ? "." : opt.out.substr(0, slash);
  }

  if (cmd == "info") {
    bool cok = true;
    rep["checks"] = exactness_checks(C, S, cok);
    ok = cok;
  } else if (cmd == "homology") {
    auto topo = hc::betti(S);
    rep["betti0"] = static_cast<std::int64_t>(topo.b0);
    rep["betti1"] = static_cast<std::int64_t>(topo.b1);
    rep["genus"] = static_cast<std::int64_t>(topo.genus);
    auto basis = hc::canonical_basis(C, S);
    Json cyc = Json::array();
    for (size_t i = 0; i < basis.cycles.size(); ++i) {
      Json cj = Json::object();
      cj["label"] = basis.labels[i] == hc::CycleClass::InteriorBounding ? "interior_bounding"
                                                                        : "exterior_bounding";
      cj["pair_index"] = static_cast<std::int64_t>(basis.pair_index[i]);
      cj["support_edges"] = static_cast<std::int64_t>((basis.cycles[i].array() != 0).count());
      cyc.push_back(std::move(cj));
    }
    rep["cycles"] = std::move(cyc);
    hc::Mat inter(basis.intersection.rows(), basis.intersection.cols());
    for (int i = 0; i < inter.rows(); ++i)
      for (int j = 0; j < inter.cols(); ++j)
        inter(i, j) = static_cast<double>(basis.intersection(i, j));
    rep["intersection_matrix"] = hc::report::matrix_json(inter, "intersection", sidecar_dir);
  } else if (cmd == "hodge" || cmd == "basis" || cmd == "spectrum" || cmd == "curlcurl" ||
             cmd == "verify") {
    auto B = hc::build_operator_bundle(C, S, opt.seed);
    const int g = B.genus();
    rep["genus"] = static_cast<std::int64_t>(g);
    rep["harmonic_dim"] = static_cast<std::int64_t>(B.hodge->harmonic_basis().cols());

    auto partition_spec = [&](const std::vector<int>& I) {
      hc::BoundaryConditionSpec spec;
      spec.trace = (opt.trace == "coclosed") ? hc::TraceClass::Coclosed : hc::TraceClass::Closed;
      spec.partition = hc::PartitionSpec{I, g};
      spec.drop_symplectic_row = opt.drop_symplectic_row;
      return spec;
    };
    std::vector<int> I;
    if (!opt.partition.empty())
      I = parse_partition(opt.partition);
    else
      for (int i = 1; i <= g; ++i) I.push_back(i);

    if (cmd == "hodge") {
      CheckList cl;
      std::mt19937_64 rng(opt.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      const int nbe = S.n_edges();
      double mx_ee = 0, mx_he = 0, mx_cc = 0, mx_hc = 0, mx_rec = 0, mx_orth = 0, mx_closed = 0;
      hc::Vec prev_co, prev_h, prev_ex;
      for (int t = 0; t < 8; ++t) {
        hc::Vec om(nbe);
        for (int i = 0; i < nbe; ++i) om[i] = dist(rng);
        om /= std::sqrt(om.dot(B.hodge->M1() * om));
        auto sp = B.hodge->hodge_decompose(om);
        hc::Vec rec = sp.exact + sp.coexact + sp.harmonic;
        mx_rec = std::max(mx_rec, (rec - om).norm() / om.norm());
        mx_orth = std::max({mx_orth, std::abs(sp.exact.dot(B.hodge->M1() * sp.coexact)),
                            std::abs(sp.exact.dot(B.hodge->M1() * sp.harmonic)),
                            std::abs(sp.coexact.dot(B.hodge->M1() * sp.harmonic))});
        mx_closed = std::max(mx_closed,
                             hc::Vec(S.d1.cast<double>() * sp.harmonic).cwiseAbs().maxCoeff());
        if (t > 0) {
          mx_ee = std::max(mx_ee, std::abs(B.hodge->pairing(sp.exact, prev_ex)));
          mx_he = std::max(mx_he, std::abs(B.hodge->pairing(sp.harmonic, prev_ex)));
          mx_cc = std::max(mx_cc, std::abs(B.hodge->pairing(sp.coexact, prev_co)));
          mx_hc = std::max(mx_hc, std::abs(B.hodge->pairing(sp.harmonic, prev_co)));
        }
        prev_co = sp.coexact;
        prev_h = sp.harmonic;
        prev_ex = sp.exact;
      }
      cl.add("reconstruction_rel", mx_rec, 1e-10);
      cl.add("parts_m1_orthogonal", mx_orth, 1e-10);
      cl.add("harmonic_closed_max", mx_closed, 1e-10);
      cl.add("pairing_exact_exact", mx_ee, 1e-12);
      cl.add("pairing_harmonic_exact", mx_he, 1e-9);
      rep["pairing_coexact_coexact"] = mx_cc;
      rep["pairing_harmonic_coexact"] = mx_hc;
      rep["checks"] = cl.checks;
      ok = cl.ok;
    } else if (cmd == "basis") {
      CheckList cl;
      if (g > 0) {
        hc::Mat J = hc::Mat::Zero(2 * g, 2 * g);
        J.topRightCorner(g, g) = hc::Mat::Identity(g, g);
        J.bottomLeftCorner(g, g) = -hc::Mat::Identity(g, g);
        cl.add("period_matrix_identity_err", hc::inf_norm(hc::Mat(B.basis.P - hc::Mat::Identity(2 * g, 2 * g))),
               B.basis.tol_basis);
        cl.add("gram_symplectic_err", hc::inf_norm(hc::Mat(B.basis.Gram - J)), B.basis.tol_symp);
        rep["period_matrix"] = hc::report::matrix_json(B.basis.P, "period_matrix", sidecar_dir);
        rep["gram_matrix"] = hc::report::matrix_json(B.basis.Gram, "gram_matrix", sidecar_dir);
      }
      rep["tol_basis"] = B.basis.tol_basis;
      rep["tol_symp"] = B.basis.tol_symp;
      rep["checks"] = cl.checks;
      ok = cl.ok;
    } else if (cmd == "spectrum") {
      hc::SpectrumOptions so;
      so.k = opt.k;
      so.zero_tol = opt.zero_tol;
      so.seed = opt.seed;
      so.dense_threshold = opt.dense_threshold;
      auto spec = partition_spec(I);
      auto srep = hc::solve_spectrum(B, spec, so);
      rep["trace_class"] = opt.trace;
      Json pj = Json::array();
      for (int i : I) pj.push_back(static_cast<std::int64_t>(i));
      rep["partition_I"] = std::move(pj);
      rep["eigenvalues"] = hc::report::vector_json(srep.eigenvalues);
      rep["residuals"] = hc::report::vector_json(srep.residuals);
      rep["whitney_residuals"] = hc::report::vector_json(srep.whitney_residuals);
      rep["zero_mode_count"] = static_cast<std::int64_t>(srep.zero_mode_count);
      rep["gradient_mode_count"] = static_cast<std::int64_t>(srep.gradient_mode_count);
      rep["gkn_asymmetry_abs"] = srep.asymmetry_abs;
      rep["gkn_asymmetry_rel"] = srep.asymmetry_rel;
      rep["spectral_scale"] = srep.rho;
      rep["mesh_scale"] = srep.mesh_scale;
      rep["zero_tol"] = opt.zero_tol;
      rep["dense_path"] = srep.dense_path;
      rep["eigenvectors"] =
          hc::report::matrix_json(srep.eigenvectors, "eigenvectors", sidecar_dir);
      double worst = 0;
      for (double r : srep.residuals) worst = std::max(worst, r);
      ok = worst <= 1e-8;
    } else if (cmd == "curlcurl") {
      auto dir = hc::assemble_curlcurl(C, S, hc::CurlCurlBC::Dirichlet);
      auto neu = hc::assemble_curlcurl(C, S, hc::CurlCurlBC::Neumann);
      auto dmu = hc::curlcurl_spectrum(dir, opt.k, opt.seed, opt.dense_threshold);
      auto nmu = hc::curlcurl_spectrum(neu, opt.k, opt.seed, opt.dense_threshold);
      auto lowest_nonzero = [&](const hc::Vec& mu, int count) {
        std::vector<double> out;
        double scale = std::max(mu.cwiseAbs().maxCoeff(), 1.0);
        for (int i = 0; i < mu.size() && static_cast<int>(out.size()) < count; ++i)
          if (mu[i] > 1e-8 * scale) out.push_back(mu[i]);
        return out;
      };
      rep["dirichlet_mu"] = hc::report::vector_json(lowest_nonzero(dmu, opt.k));
      rep["neumann_mu"] = hc::report::vector_json(lowest_nonzero(nmu, opt.k));
      auto spec = partition_spec(I);
      hc::SpectrumOptions so;
      so.k = opt.k;
      so.seed = opt.seed;
      so.dense_threshold = opt.dense_threshold;
      auto srep = hc::solve_spectrum(B, spec, so);
      std::vector<double> sq;
      for (double l : srep.eigenvalues) sq.push_back(l * l);
      std::sort(sq.begin(), sq.end());
      rep["curl_s_lambda_squared"] = hc::report::vector_json(sq);
      rep["hausdorff_dirichlet_vs_sq"] = hc::hausdorff(lowest_nonzero(dmu, opt.k), sq);
      auto rows = hc::constraint_rows(B, spec);
      auto R = hc::restricted_operator(B, rows, true);
      if (R.n_constrained <= opt.dense_threshold) {
        auto sc = hc::square_check(R);
        rep["square_identity_rel_mismatch"] = sc.max_rel_mismatch;
        ok = sc.max_rel_mismatch <= 1e-7;
      }
      rep["note"] = std::string(
          "curl-curl domains containing fields whose curl is not square-integrable have no "
          "conforming edge-element representation and are not assembled; the spectral gap "
          "reported here is an illustration, not a proof");
    } else {  // verify
      CheckList cl;
      bool cok = true;
      rep["exactness"] = exactness_checks(C, S, cok);
      if (!cok) ok = false;
      auto topo = hc::betti(S);
      cl.add_bool("harmonic_dim_equals_2g",
                  B.hodge->harmonic_basis().cols() == 2 * topo.genus);
      if (g > 0) {
        hc::Mat J = hc::Mat::Zero(2 * g, 2 * g);
        J.topRightCorner(g, g) = hc::Mat::Identity(g, g);
        J.bottomLeftCorner(g, g) = -hc::Mat::Identity(g, g);
        cl.add("period_matrix_identity_err",
               hc::inf_norm(hc::Mat(B.basis.P - hc::Mat::Identity(2 * g, 2 * g))),
               B.basis.tol_basis);
        cl.add("gram_symplectic_err", hc::inf_norm(hc::Mat(B.basis.Gram - J)), B.basis.tol_symp);
      }
      // GKN certificate for the selected partition (closed traces)
      hc::BoundaryConditionSpec spec;
      spec.trace = hc::TraceClass::Closed;
      spec.partition = hc::PartitionSpec{I, g};
      spec.drop_symplectic_row = opt.drop_symplectic_row;
      auto rows = hc::constraint_rows(B, spec);
      bool dense = C.n_edges() - static_cast<int>(rows.A.rows()) <= opt.dense_threshold;
      auto R = hc::restricted_operator(B, rows, dense);
      cl.add("gkn_asymmetry_rel", R.asymmetry_rel, 1e-10);
      cl.add("constraint_residual", R.max_constraint_residual, 1e-11);
      rep["checks"] = cl.checks;
      if (!cl.ok) ok = false;
    }
  } else {
    throw CLI::ValidationError("unknown command " + cmd);
  }

  rep["all_checks_pass"] = ok;
  std::string text = rep.dump();
  if (!opt.out.empty()) {
    std::ofstream f(opt.out, std::ios::binary);
    f << text;
  }
  std::cout << text;
  return (cmd == "verify" && !ok) ? 6 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("HODGECURL_THREADS")) {
    int t = std::atoi(threads);
    if (t > 0) Eigen::setNbThreads(t);
  } else {
    Eigen::setNbThreads(1);
  }

  CLI::App app{"discrete self-adjoint curl operators on tetrahedral meshes"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags win)");

  RunOptions opt;
  std::string cmd;
  for (const char* name : {"info", "homology", "hodge", "basis", "spectrum", "curlcurl",
                           "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--mesh", opt.mesh.mesh_file, "MSH v2.2 ASCII mesh file");
    sub->add_option("--gen", opt.mesh.gen, "built-in generator: cube | ball | solid-torus");
    sub->add_option("--n", opt.mesh.n, "generator resolution");
    sub->add_option("--refine", opt.mesh.refine, "generator refinement level (n = 4*2^level)");
    sub->add_option("--radius", opt.mesh.radius, "ball radius");
    sub->add_flag("--symmetric", opt.mesh.symmetric, "mirror-symmetric 24-tet hex split");
    sub->add_option("--R", opt.mesh.R, "torus major radius");
    sub->add_option("--r", opt.mesh.r, "torus minor radius");
    sub->add_option("--nu", opt.mesh.nu, "torus angular resolution");
    sub->add_option("--nv", opt.mesh.nv, "torus cross-section resolution");
    sub->add_option("--nw", opt.mesh.nw, "torus cross-section layers");
    sub->add_option("--trace", opt.trace, "closed | coclosed")
        ->check(CLI::IsMember({"closed", "coclosed"}));
    sub->add_option("--partition-I", opt.partition, "comma-separated indices in 1..g");
    sub->add_option("--k", opt.k, "number of eigenpairs");
    sub->add_option("--zero-tol", opt.zero_tol, "relative kernel threshold");
    sub->add_option("--seed", opt.seed, "solver seed (recorded in the report)");
    sub->add_option("--out", opt.out, "write the JSON report to this path");
    sub->add_flag("--drop-symplectic-row", opt.drop_symplectic_row,
                  "negative control: omit one symplectic constraint row");
    sub->add_option("--dense-threshold", opt.dense_threshold,
                    "dense eigensolver size limit");
    sub->callback([&cmd, name] { cmd = name; });
  }

  try {
    app.parse(argc, argv);
    return run_command(cmd, opt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints; exit code nonzero for errors
  } catch (const hc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const hc::BadPartitionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hc::InvalidLagrangianError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hc::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return 2;
  } catch (const hc::OpenChainError& e) {
    std::cerr << "homology error: " << e.what() << "\n";
    return 3;
  } catch (const hc::SingularPairingError& e) {
    std::cerr << "homology error: " << e.what() << "\n";
    return 3;
  } catch (const hc::SingularPeriodsError& e) {
    std::cerr << "hodge error: " << e.what() << "\n";
    return 4;
  } catch (const hc::DimensionMismatchError& e) {
    std::cerr << "hodge error: " << e.what() << "\n";
    return 4;
  } catch (const hc::SizeMismatchError& e) {
    std::cerr << "hodge error: " << e.what() << "\n";
    return 4;
  } catch (const hc::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
