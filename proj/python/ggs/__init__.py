# Copyright Contributors to the ggs project
# SPDX-License-Identifier: Apache-2.0
"""Gaussian splatting reconstruction of thin, non-watertight surfaces."""

from ._core import (
    ConfigError,
    Error,
    InvalidInput,
    IoError,
    LofModel,
    __version__,
    chamfer_distance,
    count_boundary_loops,
    default_config,
    denoise_mesh,
    euler_characteristic,
    load_config,
    marching_cubes,
    nearest_in_cloud,
    psnr,
    read_manifest,
    run_denoise,
    run_eval,
    run_extract,
    run_mvs,
    run_train,
    sample_surface,
    set_thread_count,
    sha256_file,
    ssim,
    thread_count,
    verify_manifest,
    write_synthetic_scene,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
