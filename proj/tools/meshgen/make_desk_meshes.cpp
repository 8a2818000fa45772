// SPDX-License-Identifier: Apache-2.0

// Writes the desk-scale example meshes (gmsh 4.1 ASCII) used by data/*.ini.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/mesh/msh_reader.hpp"
#include "hydrosem/post/io.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;

namespace
{

void Write(const std::filesystem::path &dir, const std::string &name, const mesh::HybridMesh &m)
{
  post::WriteText((dir / name).string(), mesh::WriteMsh(m));
  std::cout << fmt::format("{}: {} elements ({} prisms, {} tets)\n", name, m.NumElements(),
                           m.NumPrisms(), m.NumTets());
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"desk-scale example meshes"};
  std::string out = "data";
  app.add_option("--output-dir", out, "target directory");
  CLI11_PARSE(app, argc, argv);
  try
  {
    std::filesystem::create_directories(out);

    // Floating hemisphere, R = 5 m in 25 m of water.
    meshgen::SphereSpec sphere;
    sphere.radius = 5.0;
    sphere.depth = 25.0;
    sphere.extent = 40.0;
    sphere.cell = 2.5;
    sphere.far_cell = 7.5;
    sphere.blend_outer = 10.0;
    sphere.prism_height = 1.25;
    Write(out, "sphere_quarter.msh", meshgen::Sphere(sphere));

    // Floating box 2 x 2 x 1 m.
    meshgen::FloatingBoxSpec box;
    box.half_length = 1.0;
    box.half_width = 1.0;
    box.draft = 1.0;
    box.depth = 4.0;
    box.extent = 8.0;
    box.cell = 0.5;
    box.far_cell = 1.0;
    box.prism_height = 0.25;
    Write(out, "box_quarter.msh", meshgen::FloatingBox(box));

    // Moonpool box with a lid over the chamber.
    meshgen::FloatingBoxSpec pool = box;
    pool.half_length = 1.5;
    pool.half_width = 1.5;
    pool.chamber_half_length = 0.5;
    pool.chamber_half_width = 0.5;
    Write(out, "moonpool_quarter.msh", meshgen::FloatingBox(pool));
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
