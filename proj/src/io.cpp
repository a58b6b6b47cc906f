// Copyright Contributors to the ggs project
// SPDX-License-Identifier: Apache-2.0
#include "ggs/io.hpp"

#include "ggs/gaussian.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

static_assert(std::endian::native == std::endian::little, "binary writers assume a little-endian host");

namespace ggs::io {
namespace {

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + quoted(path) + " for reading");
    return in;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + quoted(path) + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + quoted(path));
}

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

// ---- PLY --------------------------------------------------------------

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_type(const std::string& s, const fs::path& path) {
    if (s == "char" || s == "int8") return PlyType::i8;
    if (s == "uchar" || s == "uint8") return PlyType::u8;
    if (s == "short" || s == "int16") return PlyType::i16;
    if (s == "ushort" || s == "uint16") return PlyType::u16;
    if (s == "int" || s == "int32") return PlyType::i32;
    if (s == "uint" || s == "uint32") return PlyType::u32;
    if (s == "float" || s == "float32") return PlyType::f32;
    if (s == "double" || s == "float64") return PlyType::f64;
    throw IoError("unknown PLY property type '" + s + "' in " + quoted(path));
}

template <class T>
double read_as(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<double>(v);
}

double read_binary(std::istream& in, PlyType t) {
    switch (t) {
        case PlyType::i8: return read_as<std::int8_t>(in);
        case PlyType::u8: return read_as<std::uint8_t>(in);
        case PlyType::i16: return read_as<std::int16_t>(in);
        case PlyType::u16: return read_as<std::uint16_t>(in);
        case PlyType::i32: return read_as<std::int32_t>(in);
        case PlyType::u32: return read_as<std::uint32_t>(in);
        case PlyType::f32: return read_as<float>(in);
        case PlyType::f64: return read_as<double>(in);
    }
    return 0.0;
}

struct PropertySpec {
    std::string name;
    bool is_list = false;
    PlyType count_type = PlyType::u8;
    PlyType value_type = PlyType::f32;
};

struct ElementSpec {
    std::string name;
    std::size_t count = 0;
    std::vector<PropertySpec> props;
};

}  // namespace

const std::vector<double>& PlyElement::column(const std::string& prop) const {
    auto it = scalars.find(prop);
    if (it == scalars.end()) throw IoError("PLY element '" + name + "' has no property '" + prop + "'");
    return it->second;
}

const PlyElement* PlyData::find(const std::string& name) const {
    for (const auto& e : elements)
        if (e.name == name) return &e;
    return nullptr;
}

PlyData read_ply(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("ply", 0) != 0) throw IoError(quoted(path) + " is not a PLY file");
    bool ascii = false;
    std::vector<ElementSpec> specs;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") ascii = true;
            else if (fmt != "binary_little_endian")
                throw IoError("unsupported PLY format '" + fmt + "' in " + quoted(path));
        } else if (kw == "element") {
            ElementSpec e;
            ls >> e.name >> e.count;
            specs.push_back(e);
        } else if (kw == "property") {
            if (specs.empty()) throw IoError("PLY property before any element in " + quoted(path));
            PropertySpec p;
            std::string t;
            ls >> t;
            if (t == "list") {
                std::string ct, vt;
                ls >> ct >> vt >> p.name;
                p.is_list = true;
                p.count_type = parse_type(ct, path);
                p.value_type = parse_type(vt, path);
            } else {
                ls >> p.name;
                p.value_type = parse_type(t, path);
            }
            specs.back().props.push_back(p);
        } else if (kw == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw IoError("PLY header not terminated in " + quoted(path));

    PlyData data;
    for (const auto& spec : specs) {
        PlyElement el;
        el.name = spec.name;
        el.count = spec.count;
        for (const auto& p : spec.props) {
            el.property_order.push_back(p.name);
            if (p.is_list) el.lists[p.name].reserve(spec.count);
            else el.scalars[p.name].reserve(spec.count);
        }
        for (std::size_t r = 0; r < spec.count; ++r) {
            std::istringstream row;
            if (ascii) {
                if (!std::getline(in, line)) throw IoError("truncated PLY body in " + quoted(path));
                row.str(line);
            }
            for (const auto& p : spec.props) {
                auto next = [&](PlyType t) {
                    double v = 0.0;
                    if (ascii) row >> v;
                    else v = read_binary(in, t);
                    return v;
                };
                if (p.is_list) {
                    const auto n = static_cast<long long>(next(p.count_type));
                    if (n < 0) throw IoError("negative list length in " + quoted(path));
                    std::vector<long long> vals(static_cast<std::size_t>(n));
                    for (auto& v : vals) v = static_cast<long long>(next(p.value_type));
                    el.lists[p.name].push_back(std::move(vals));
                } else {
                    el.scalars[p.name].push_back(next(p.value_type));
                }
            }
            if (!in || (ascii && row.fail())) throw IoError("truncated or malformed PLY body in " + quoted(path));
        }
        data.elements.push_back(std::move(el));
    }
    return data;
}

namespace {

void write_header(std::ostream& out, std::size_t n_vertex, const std::vector<std::string>& float_props,
                  std::size_t n_face = 0) {
    out << "ply\nformat binary_little_endian 1.0\ncomment ggs\n";
    out << "element vertex " << n_vertex << "\n";
    for (const auto& p : float_props) out << "property float " << p << "\n";
    if (n_face > 0) out << "element face " << n_face << "\nproperty list uchar int vertex_indices\n";
    out << "end_header\n";
}

const PlyElement& vertex_element(const PlyData& d, const fs::path& path) {
    const PlyElement* v = d.find("vertex");
    if (!v) throw IoError(quoted(path) + " has no vertex element");
    return *v;
}

std::vector<Vec3> column_vec3(const PlyElement& v, const char* a, const char* b, const char* c) {
    const auto& x = v.column(a);
    const auto& y = v.column(b);
    const auto& z = v.column(c);
    std::vector<Vec3> out(v.count);
    for (std::size_t i = 0; i < v.count; ++i) out[i] = {x[i], y[i], z[i]};
    return out;
}

}  // namespace

void write_gaussians(const fs::path& path, const GaussianCloud& cloud) {
    std::ofstream out = open_out(path);
    write_header(out, cloud.size(),
                 {"x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2", "opacity", "scale_0", "scale_1", "scale_2", "rot_0",
                  "rot_1", "rot_2", "rot_3"});
    for (const auto& g : cloud.primitives) {
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(g.position[k]));
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(g.color[k]));
        put(out, static_cast<float>(g.opacity_logit));
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(g.log_scale[k]));
        for (int k = 0; k < 4; ++k) put(out, static_cast<float>(g.rotation[k]));
    }
    finish(out, path);
}

GaussianCloud read_gaussians(const fs::path& path) {
    const PlyData d = read_ply(path);
    const PlyElement& v = vertex_element(d, path);
    const auto pos = column_vec3(v, "x", "y", "z");
    const auto col = column_vec3(v, "f_dc_0", "f_dc_1", "f_dc_2");
    const auto ls = column_vec3(v, "scale_0", "scale_1", "scale_2");
    const auto& op = v.column("opacity");
    const auto& r0 = v.column("rot_0");
    const auto& r1 = v.column("rot_1");
    const auto& r2 = v.column("rot_2");
    const auto& r3 = v.column("rot_3");
    GaussianCloud cloud;
    cloud.primitives.resize(v.count);
    for (std::size_t i = 0; i < v.count; ++i) {
        auto& g = cloud.primitives[i];
        g.position = pos[i];
        g.color = col[i];
        g.log_scale = ls[i];
        g.opacity_logit = op[i];
        g.rotation = {r0[i], r1[i], r2[i], r3[i]};
    }
    return cloud;
}

void write_point_cloud(const fs::path& path, const DensePointCloud& cloud) {
    if (cloud.normals.size() != cloud.positions.size())
        throw InvalidInput("point cloud has " + std::to_string(cloud.normals.size()) + " normals for " +
                           std::to_string(cloud.positions.size()) + " positions");
    std::ofstream out = open_out(path);
    write_header(out, cloud.size(), {"x", "y", "z", "nx", "ny", "nz"});
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(cloud.positions[i][k]));
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(cloud.normals[i][k]));
    }
    finish(out, path);
}

DensePointCloud read_point_cloud(const fs::path& path) {
    const PlyData d = read_ply(path);
    const PlyElement& v = vertex_element(d, path);
    if (!v.has("nx")) throw IoError(quoted(path) + " has no normals (nx ny nz)");
    DensePointCloud cloud;
    cloud.positions = column_vec3(v, "x", "y", "z");
    cloud.normals = column_vec3(v, "nx", "ny", "nz");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double n = cloud.normals[i].norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw IoError("zero or non-finite normal at point " + std::to_string(i) + " in " + quoted(path));
        cloud.normals[i] /= n;
    }
    return cloud;
}

std::vector<Vec3> read_points(const fs::path& path) {
    const PlyData d = read_ply(path);
    return column_vec3(vertex_element(d, path), "x", "y", "z");
}

void write_mesh_ply(const fs::path& path, const TriangleMesh& mesh) {
    std::ofstream out = open_out(path);
    out << "ply\nformat binary_little_endian 1.0\ncomment ggs\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "element face " << mesh.faces.size() << "\nproperty list uchar int vertex_indices\n";
    out << "end_header\n";
    for (const auto& v : mesh.vertices)
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(v[k]));
    for (const auto& f : mesh.faces) {
        put(out, static_cast<std::uint8_t>(3));
        for (int k = 0; k < 3; ++k) put(out, static_cast<std::int32_t>(f[static_cast<std::size_t>(k)]));
    }
    finish(out, path);
}

namespace {

TriangleMesh read_mesh_ply(const fs::path& path) {
    const PlyData d = read_ply(path);
    TriangleMesh mesh;
    mesh.vertices = column_vec3(vertex_element(d, path), "x", "y", "z");
    if (const PlyElement* f = d.find("face")) {
        auto it = f->lists.find("vertex_indices");
        if (it == f->lists.end()) it = f->lists.find("vertex_index");
        if (it == f->lists.end()) throw IoError(quoted(path) + " face element lacks vertex_indices");
        for (const auto& poly : it->second) {
            // Fan-triangulate polygons.
            for (std::size_t k = 1; k + 1 < poly.size(); ++k)
                mesh.faces.push_back({static_cast<int>(poly[0]), static_cast<int>(poly[k]), static_cast<int>(poly[k + 1])});
        }
    }
    return mesh;
}

}  // namespace

void write_obj(const fs::path& path, const TriangleMesh& mesh) {
    std::ofstream out = open_out(path);
    out << std::setprecision(9);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    finish(out, path);
}

TriangleMesh read_obj(const fs::path& path) {
    std::ifstream in = open_in(path);
    TriangleMesh mesh;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "v") {
            Vec3 v;
            ls >> v.x() >> v.y() >> v.z();
            if (ls.fail()) throw IoError("malformed vertex at line " + std::to_string(lineno) + " of " + quoted(path));
            mesh.vertices.push_back(v);
        } else if (kw == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                // Accept v, v/vt, v//vn, v/vt/vn; negative indices are relative.
                const int i = std::stoi(tok.substr(0, tok.find('/')));
                idx.push_back(i > 0 ? i - 1 : static_cast<int>(mesh.vertices.size()) + i);
            }
            if (idx.size() < 3) throw IoError("face with fewer than 3 vertices at line " + std::to_string(lineno) + " of " + quoted(path));
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.faces.push_back({idx[0], idx[k], idx[k + 1]});
        }
    }
    return mesh;
}

void write_mesh(const fs::path& path, const TriangleMesh& mesh) {
    const auto ext = path.extension().string();
    if (ext == ".obj") write_obj(path, mesh);
    else if (ext == ".ply") write_mesh_ply(path, mesh);
    else throw IoError("unsupported mesh extension for " + quoted(path) + " (use .obj or .ply)");
}

TriangleMesh read_mesh(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".obj") return read_obj(path);
    if (ext == ".ply") return read_mesh_ply(path);
    throw IoError("unsupported mesh extension for " + quoted(path) + " (use .obj or .ply)");
}

// ---- PNG --------------------------------------------------------------

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg;
    png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

}  // namespace

Image read_png(const fs::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + quoted(path) + " for reading");
    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError(quoted(path) + " is not a PNG file");
    std::string err;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed");
    }
    Image img;
    std::vector<png_byte> buffer;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed for " + quoted(path) + ": " + err);
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    const auto color_type = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int src_ch = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    buffer.resize(stride * static_cast<std::size_t>(h));
    rows.resize(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + stride * static_cast<std::size_t>(y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const int out_ch = src_ch >= 3 ? 3 : 1;
    img = Image(w, h, out_ch);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < out_ch; ++c)
                img.at(x, y, c) = rows[static_cast<std::size_t>(y)][x * src_ch + c] / 255.0;
    return img;
}

void write_png(const fs::path& path, const Image& image) {
    if (image.channels != 1 && image.channels != 3)
        throw InvalidInput("PNG output needs 1 or 3 channels, got " + std::to_string(image.channels));
    if (image.empty()) throw InvalidInput("cannot write an empty image to " + quoted(path));
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open " + quoted(path) + " for writing");
    std::string err;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    std::vector<png_byte> buffer(image.data.size());
    for (std::size_t i = 0; i < buffer.size(); ++i)
        buffer[i] = static_cast<png_byte>(std::lround(std::clamp(image.data[i], 0.0, 1.0) * 255.0));
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + stride * static_cast<std::size_t>(y);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed for " + quoted(path) + ": " + err);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---- PFM --------------------------------------------------------------

void write_pfm(const fs::path& path, const Image& image) {
    if (image.channels != 1 && image.channels != 3)
        throw InvalidInput("PFM output needs 1 or 3 channels, got " + std::to_string(image.channels));
    std::ofstream out = open_out(path);
    out << (image.channels == 3 ? "PF" : "Pf") << "\n" << image.width << " " << image.height << "\n-1.0\n";
    for (int y = image.height - 1; y >= 0; --y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < image.channels; ++c) put(out, static_cast<float>(image.at(x, y, c)));
    finish(out, path);
}

Image read_pfm(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::string magic;
    int w = 0, h = 0;
    double scale = 0.0;
    in >> magic >> w >> h >> scale;
    in.get();
    if ((magic != "PF" && magic != "Pf") || w <= 0 || h <= 0 || !in)
        throw IoError(quoted(path) + " is not a PFM file");
    if (scale > 0.0) throw IoError("big-endian PFM is not supported: " + quoted(path));
    Image img(w, h, magic == "PF" ? 3 : 1);
    for (int y = h - 1; y >= 0; --y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < img.channels; ++c) img.at(x, y, c) = read_as<float>(in);
    if (!in) throw IoError("truncated PFM " + quoted(path));
    return img;
}

void write_depth_pfm(const fs::path& path, const DepthMap& depth) {
    Image img(depth.width, depth.height, 1);
    img.data = depth.depth;
    write_pfm(path, img);
}

// ---- cameras ----------------------------------------------------------

std::vector<CameraEntry> read_cameras(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("camera file not found: " + quoted(path));
    std::ifstream in = open_in(path);
    std::vector<CameraEntry> cams;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        CameraEntry e;
        CameraModel& c = e.camera;
        ls >> e.id >> c.fx >> c.fy >> c.cx >> c.cy >> c.rotation[0] >> c.rotation[1] >> c.rotation[2] >>
            c.rotation[3] >> c.translation[0] >> c.translation[1] >> c.translation[2] >> c.width >> c.height;
        if (ls.fail())
            throw IoError("malformed camera at line " + std::to_string(lineno) + " of " + quoted(path) +
                          " (expected: id fx fy cx cy qw qx qy qz tx ty tz width height)");
        try {
            c.rotation = normalize_quaternion(c.rotation);
            c.validate();
        } catch (const InvalidInput& ex) {
            throw IoError("invalid camera at line " + std::to_string(lineno) + " of " + quoted(path) + ": " + ex.what());
        }
        cams.push_back(e);
    }
    if (cams.empty()) throw IoError("no cameras in " + quoted(path));
    return cams;
}

void write_cameras(const fs::path& path, const std::vector<CameraEntry>& cameras) {
    std::ofstream out = open_out(path);
    out << "# id fx fy cx cy qw qx qy qz tx ty tz width height\n" << std::setprecision(17);
    for (const auto& e : cameras) {
        const CameraModel& c = e.camera;
        out << e.id << ' ' << c.fx << ' ' << c.fy << ' ' << c.cx << ' ' << c.cy;
        for (int k = 0; k < 4; ++k) out << ' ' << c.rotation[k];
        for (int k = 0; k < 3; ++k) out << ' ' << c.translation[k];
        out << ' ' << c.width << ' ' << c.height << '\n';
    }
    finish(out, path);
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("image directory not found: " + quoted(dir));
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (e.is_regular_file() && ext == ".png") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ggs::io
