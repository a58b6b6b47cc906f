// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
//
// ggs._core: numpy-facing wrappers around the library and the file stages.
#include "ggs/parallel.hpp"
#include "ggs/pipeline.hpp"
#include "ggs/spatial_index.hpp"
#include "ggs/synthetic.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ggs;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray = py::array_t<long long, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> to_points(const Array& a, const char* what) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw InvalidInput(std::string(what) + " must have shape (N, 3)");
    std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) out[static_cast<std::size_t>(i)] = Vec3(r(i, 0), r(i, 1), r(i, 2));
    return out;
}

Array from_points(const std::vector<Vec3>& p) {
    Array a({static_cast<py::ssize_t>(p.size()), py::ssize_t{3}});
    auto w = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < p.size(); ++i)
        for (int c = 0; c < 3; ++c) w(static_cast<py::ssize_t>(i), c) = p[i][c];
    return a;
}

TriangleMesh to_mesh(const Array& vertices, const IndexArray& faces) {
    TriangleMesh m;
    m.vertices = to_points(vertices, "vertices");
    if (faces.ndim() != 2 || faces.shape(1) != 3) throw InvalidInput("faces must have shape (F, 3)");
    auto r = faces.unchecked<2>();
    for (py::ssize_t i = 0; i < faces.shape(0); ++i) {
        m.faces.push_back({static_cast<int>(r(i, 0)), static_cast<int>(r(i, 1)), static_cast<int>(r(i, 2))});
    }
    m.validate();
    return m;
}

py::tuple from_mesh(const TriangleMesh& m) {
    IndexArray f({static_cast<py::ssize_t>(m.faces.size()), py::ssize_t{3}});
    auto w = f.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.faces.size(); ++i)
        for (int c = 0; c < 3; ++c) w(static_cast<py::ssize_t>(i), c) = m.faces[i][static_cast<std::size_t>(c)];
    return py::make_tuple(from_points(m.vertices), f);
}

Image to_image(const Array& a) {
    if (a.ndim() != 2 && a.ndim() != 3) throw InvalidInput("images must have shape (H, W) or (H, W, C)");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
    Image img(w, h, c);
    std::copy(a.data(), a.data() + img.data.size(), img.data.begin());
    return img;
}

PipelineConfig to_config(const std::map<std::string, std::string>& overrides) {
    PipelineConfig c;
    for (const auto& [k, v] : overrides) c.set(k, v);
    c.validate();
    return c;
}

py::list files_dict(const std::vector<FileRecord>& files) {
    py::list out;
    for (const auto& f : files) {
        py::dict d;
        d["path"] = f.path;
        d["sha256"] = f.sha256;
        d["bytes"] = f.bytes;
        out.append(d);
    }
    return out;
}

py::dict stage_dict(const StageRecord& r) {
    py::dict d;
    d["name"] = r.name;
    d["seconds"] = r.seconds;
    d["stats"] = r.stats;
    d["warnings"] = r.warnings;
    d["inputs"] = files_dict(r.inputs);
    d["outputs"] = files_dict(r.outputs);
    return d;
}

// Runs a stage without the GIL and converts its record afterwards.
template <typename F>
py::dict run_stage(F&& f) {
    StageRecord r;
    {
        py::gil_scoped_release release;
        r = f();
    }
    return stage_dict(r);
}

std::optional<fs::path> opt_path(const std::optional<std::string>& s) {
    return s ? std::optional<fs::path>(*s) : std::nullopt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian splatting surface reconstruction core";
    m.attr("__version__") = version_string();

    // Translators run newest first, so the base class is registered first.
    const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<IoError>(m, "IoError", base);

    m.def("thread_count", &thread_count);
    m.def("set_thread_count", &set_thread_count, py::arg("n"));

    // Metrics.
    m.def(
        "chamfer_distance",
        [](const Array& a, const Array& b, bool squared) {
            return chamfer_distance(to_points(a, "a"), to_points(b, "b"),
                                    squared ? ChamferVariant::squared : ChamferVariant::l2);
        },
        py::arg("a"), py::arg("b"), py::arg("squared") = false,
        "Sum of the two directed mean nearest-neighbor distances.");
    m.def(
        "sample_surface",
        [](const Array& v, const IndexArray& f, std::size_t count, std::uint64_t seed) {
            return from_points(sample_surface(to_mesh(v, f), count, seed));
        },
        py::arg("vertices"), py::arg("faces"), py::arg("count"), py::arg("seed") = 0);
    m.def(
        "psnr", [](const Array& a, const Array& b) { return psnr(to_image(a), to_image(b)).db; }, py::arg("a"),
        py::arg("b"), "PSNR in dB for images in [0, 1]; inf when identical.");
    m.def(
        "ssim", [](const Array& a, const Array& b) { return image_ssim(to_image(a), to_image(b)); }, py::arg("a"),
        py::arg("b"));

    // Guidance.
    m.def(
        "nearest_in_cloud",
        [](const Array& queries, const Array& cloud) {
            const SpatialIndex index(to_points(cloud, "cloud"));
            const auto q = to_points(queries, "queries");
            std::vector<Vec3> snapped(q.size());
            py::array_t<long long> ids(static_cast<py::ssize_t>(q.size()));
            auto w = ids.mutable_unchecked<1>();
            for (std::size_t i = 0; i < q.size(); ++i) {
                const Neighbor n = index.nearest(q[i]);
                w(static_cast<py::ssize_t>(i)) = n.index;
                snapped[i] = index.point(n.index);
            }
            return py::make_tuple(ids, from_points(snapped));
        },
        py::arg("queries"), py::arg("cloud"),
        "Index and position of the nearest cloud point for each query (the snapping target).");

    // LOF.
    py::class_<LofModel>(m, "LofModel")
        .def_static(
            "fit", [](const Array& reference, int k) { return LofModel::fit(to_points(reference, "reference"), k); },
            py::arg("reference"), py::arg("k") = 20)
        .def_property_readonly("k", &LofModel::k)
        .def("__len__", &LofModel::size)
        .def_property_readonly("k_distances", &LofModel::k_distances)
        .def_property_readonly("lrds", &LofModel::lrds)
        .def("reference_score", &LofModel::reference_score, py::arg("i"))
        .def(
            "score", [](const LofModel& model, const Array& q) { return model.score_all(to_points(q, "queries")); },
            py::arg("queries"), "Scores for query points without adding them to the reference.");
    m.def(
        "denoise_mesh",
        [](const Array& v, const IndexArray& f, const Array& reference, int k, double threshold,
           double min_component_fraction) {
            const TriangleMesh mesh = to_mesh(v, f);
            const LofModel model = LofModel::fit(to_points(reference, "reference"), k);
            DenoiseOptions opt;
            opt.threshold = threshold;
            opt.min_component_fraction = min_component_fraction;
            const DenoiseResult r = denoise_mesh(mesh, model, opt);
            py::dict d;
            auto vf = from_mesh(r.mesh);
            d["vertices"] = vf[0];
            d["faces"] = vf[1];
            d["kept_faces"] = r.kept_faces;
            d["vertex_scores"] = r.vertex_scores;
            d["outlier_vertices"] = r.stats.outlier_vertices;
            d["faces_removed_lof"] = r.stats.faces_removed_lof;
            d["faces_removed_components"] = r.stats.faces_removed_components;
            return d;
        },
        py::arg("vertices"), py::arg("faces"), py::arg("reference"), py::arg("k") = 20, py::arg("threshold") = 1.5,
        py::arg("min_component_fraction") = 0.005);

    // Mesh topology and extraction.
    m.def(
        "count_boundary_loops", [](const Array& v, const IndexArray& f) { return count_boundary_loops(to_mesh(v, f)); },
        py::arg("vertices"), py::arg("faces"));
    m.def(
        "euler_characteristic",
        [](const Array& v, const IndexArray& f) { return euler_characteristic(to_mesh(v, f)); }, py::arg("vertices"),
        py::arg("faces"));
    m.def(
        "marching_cubes",
        [](const Array& tsdf, std::optional<Array> weight, double voxel_size, std::array<double, 3> origin) {
            if (tsdf.ndim() != 3) throw InvalidInput("tsdf must be a 3D array indexed [i, j, k]");
            if (weight && (weight->ndim() != 3 || weight->shape(0) != tsdf.shape(0) ||
                           weight->shape(1) != tsdf.shape(1) || weight->shape(2) != tsdf.shape(2))) {
                throw InvalidInput("weight must match the tsdf shape");
            }
            TsdfVolume vol(Vec3(origin[0], origin[1], origin[2]), voxel_size,
                           {static_cast<int>(tsdf.shape(0)), static_cast<int>(tsdf.shape(1)),
                            static_cast<int>(tsdf.shape(2))});
            auto t = tsdf.unchecked<3>();
            for (int k = 0; k < vol.dims[2]; ++k)
                for (int j = 0; j < vol.dims[1]; ++j)
                    for (int i = 0; i < vol.dims[0]; ++i) {
                        vol.tsdf[vol.index(i, j, k)] = t(i, j, k);
                        vol.weight[vol.index(i, j, k)] = weight ? weight->at(i, j, k) : 1.0;
                    }
            vol.check_invariants();
            return from_mesh(marching_cubes(vol));
        },
        py::arg("tsdf"), py::arg("weight") = py::none(), py::arg("voxel_size") = 1.0,
        py::arg("origin") = std::array<double, 3>{0, 0, 0},
        "Surface at the zero level; normals point toward positive values. Corners with weight 0 are skipped.");

    // Files, scenes and stages.
    m.def("sha256_file", [](const fs::path& p) { return sha256_file(p); }, py::arg("path"));
    m.def("default_config", [] { return PipelineConfig{}.to_map(); },
          "Every stage setting as 'stage.key' -> string.");
    m.def(
        "load_config", [](const fs::path& p) { return load_pipeline_config(p).to_map(); }, py::arg("path"));
    m.def(
        "verify_manifest", [](const fs::path& p) { return verify_manifest(read_manifest(p)); }, py::arg("path"),
        "Paths whose digest no longer matches the manifest.");
    m.def(
        "read_manifest",
        [](const fs::path& p) {
            const Manifest mf = read_manifest(p);
            py::dict d;
            d["tool"] = mf.tool;
            d["version"] = mf.version;
            d["command"] = mf.command;
            d["config"] = mf.config;
            py::list stages;
            for (const auto& s : mf.stages) stages.append(stage_dict(s));
            d["stages"] = stages;
            return d;
        },
        py::arg("path"));
    m.def(
        "write_synthetic_scene",
        [](const std::string& kind, const fs::path& out, int views, int width, int height, std::uint64_t seed) {
            synth::SceneOptions opt;
            opt.views = views;
            opt.width = width;
            opt.height = height;
            opt.seed = seed;
            py::gil_scoped_release release;
            const synth::Scene s = synth::make_scene(kind, opt);
            write_scene(out, s.cameras, s.images, &s.mesh, &s.cloud);
        },
        py::arg("kind"), py::arg("out_dir"), py::arg("views") = 20, py::arg("width") = 64, py::arg("height") = 64,
        py::arg("seed") = 7, "Writes cameras.txt, images/ and reference geometry for 'sphere', 'tube' or 'plane'.");

    using Overrides = std::map<std::string, std::string>;
    m.def(
        "run_mvs",
        [](const fs::path& scene, const fs::path& out, const Overrides& o) {
            const PipelineConfig c = to_config(o);
            return run_stage([&] { return stage_mvs(load_scene(scene), c.mvs, out); });
        },
        py::arg("scene"), py::arg("out_dir"), py::arg("config") = Overrides{});
    m.def(
        "run_train",
        [](const fs::path& scene, const fs::path& cloud, const fs::path& out, const Overrides& o,
           const std::optional<std::string>& init) {
            const PipelineConfig c = to_config(o);
            return run_stage([&] { return stage_train(load_scene(scene), cloud, c.train, out, opt_path(init)); });
        },
        py::arg("scene"), py::arg("cloud"), py::arg("out_dir"), py::arg("config") = Overrides{},
        py::arg("init") = py::none());
    m.def(
        "run_extract",
        [](const fs::path& scene, const fs::path& checkpoint, const fs::path& out, const Overrides& o) {
            const PipelineConfig c = to_config(o);
            return run_stage([&] { return stage_extract(load_scene(scene, false), checkpoint, c.extract, out); });
        },
        py::arg("scene"), py::arg("checkpoint"), py::arg("out_dir"), py::arg("config") = Overrides{});
    m.def(
        "run_denoise",
        [](const fs::path& mesh, const fs::path& cloud, const fs::path& out, const Overrides& o) {
            const PipelineConfig c = to_config(o);
            return run_stage([&] { return stage_denoise(mesh, cloud, c.lof_k, c.denoise, out); });
        },
        py::arg("mesh"), py::arg("cloud"), py::arg("out_dir"), py::arg("config") = Overrides{});
    m.def(
        "run_eval",
        [](const fs::path& scene, const fs::path& checkpoint, const fs::path& out, const Overrides& o,
           const std::optional<std::string>& mesh, const std::optional<std::string>& reference) {
            const PipelineConfig c = to_config(o);
            return run_stage([&] {
                return stage_eval(load_scene(scene), checkpoint, opt_path(mesh), opt_path(reference), c.eval, out);
            });
        },
        py::arg("scene"), py::arg("checkpoint"), py::arg("out_dir"), py::arg("config") = Overrides{},
        py::arg("mesh") = py::none(), py::arg("reference") = py::none());
}
