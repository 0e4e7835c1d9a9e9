#include "dfuse/model_io.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "dfuse/archive.h"

namespace dfuse {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<double> flatten_vec3(const std::vector<Vec3>& v) {
  std::vector<double> out;
  out.reserve(v.size() * 3);
  for (const auto& p : v) {
    out.push_back(p.x());
    out.push_back(p.y());
    out.push_back(p.z());
  }
  return out;
}

std::vector<double> flatten_mat(const MatX& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

MatX unflatten_mat(const std::vector<double>& data, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::runtime_error("model file: array size mismatch");
  MatX m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

BodyModel from_parts(std::vector<double> tmpl, std::vector<int32_t> faces,
                     std::vector<double> shape, uint64_t S, std::vector<double> pose, uint64_t P,
                     std::vector<double> regressor, std::vector<int32_t> parents,
                     std::vector<double> weights) {
  BodyModel model;
  const std::size_t N = tmpl.size() / 3;
  model.template_vertices.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    model.template_vertices[i] = Vec3(tmpl[3 * i], tmpl[3 * i + 1], tmpl[3 * i + 2]);
  model.faces.resize(faces.size() / 3);
  for (std::size_t f = 0; f < model.faces.size(); ++f)
    model.faces[f] = {faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]};
  model.shape_basis = unflatten_mat(shape, 3 * N, S);
  model.pose_basis = unflatten_mat(pose, 3 * N, P);
  model.joint_regressor = unflatten_mat(regressor, BodyModel::kJoints, N);
  model.kinematic_parents.assign(parents.begin(), parents.end());
  model.skinning_weights = unflatten_mat(weights, N, BodyModel::kJoints);
  model.finalize();
  return model;
}

}  // namespace

void save_model(const BodyModel& model, const std::string& path) {
  const uint64_t N = model.vertex_count();
  const uint64_t S = model.shape_dim();
  const uint64_t P = model.pose_basis_dim();
  if (ends_with(path, ".json")) {
    nlohmann::json j;
    j["template"] = flatten_vec3(model.template_vertices);
    std::vector<int> faces;
    for (const auto& f : model.faces) {
      faces.push_back(f[0]);
      faces.push_back(f[1]);
      faces.push_back(f[2]);
    }
    j["faces"] = faces;
    j["shape_dim"] = S;
    j["shape_basis"] = flatten_mat(model.shape_basis);
    j["pose_dim"] = P;
    j["pose_basis"] = flatten_mat(model.pose_basis);
    j["joint_regressor"] = flatten_mat(model.joint_regressor);
    j["parents"] = model.kinematic_parents;
    j["skin_weights"] = flatten_mat(model.skinning_weights);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << j.dump();
    return;
  }
  ArrayArchive arc;
  arc.put_doubles("template", flatten_vec3(model.template_vertices), {N, 3});
  std::vector<int32_t> faces;
  for (const auto& f : model.faces) {
    faces.push_back(f[0]);
    faces.push_back(f[1]);
    faces.push_back(f[2]);
  }
  arc.put_ints("faces", std::move(faces), {model.faces.size(), 3});
  arc.put_doubles("shape_basis", flatten_mat(model.shape_basis), {3 * N, S});
  arc.put_doubles("pose_basis", flatten_mat(model.pose_basis), {3 * N, P});
  arc.put_doubles("joint_regressor", flatten_mat(model.joint_regressor),
                  {static_cast<uint64_t>(BodyModel::kJoints), N});
  std::vector<int32_t> parents(model.kinematic_parents.begin(), model.kinematic_parents.end());
  arc.put_ints("parents", std::move(parents), {static_cast<uint64_t>(BodyModel::kJoints)});
  arc.put_doubles("skin_weights", flatten_mat(model.skinning_weights),
                  {N, static_cast<uint64_t>(BodyModel::kJoints)});
  arc.save(path);
}

BodyModel load_model(const std::string& path) {
  // sniff: JSON files start with '{'
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open: " + path);
  char first = 0;
  probe.read(&first, 1);
  probe.close();

  if (first == '{') {
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    std::vector<int32_t> faces;
    for (const auto& v : j["faces"]) faces.push_back(v.get<int32_t>());
    std::vector<int32_t> parents;
    for (const auto& v : j["parents"]) parents.push_back(v.get<int32_t>());
    return from_parts(j["template"].get<std::vector<double>>(), std::move(faces),
                      j["shape_basis"].get<std::vector<double>>(), j["shape_dim"].get<uint64_t>(),
                      j["pose_basis"].get<std::vector<double>>(), j["pose_dim"].get<uint64_t>(),
                      j["joint_regressor"].get<std::vector<double>>(), std::move(parents),
                      j["skin_weights"].get<std::vector<double>>());
  }

  ArrayArchive arc = ArrayArchive::load(path);
  return from_parts(arc.doubles("template"), arc.ints("faces"), arc.doubles("shape_basis"),
                    arc.dims("shape_basis")[1], arc.doubles("pose_basis"),
                    arc.dims("pose_basis")[1], arc.doubles("joint_regressor"), arc.ints("parents"),
                    arc.doubles("skin_weights"));
}

}  // namespace dfuse
