"""Frequency-aware photometric loss tools.

Spatial-frequency maps, ambiguity masking, frequency-adaptive blur,
SSIM+L1 reprojection loss, view-synthesis samplers and a loss-landscape
fairness analyzer, with synthetic scenes that have known ground truth.
"""
from ._backend import BACKEND
from .ambiguity import (AmbiguityConfig, ambiguity_map, ambiguity_weight_mask, fuse_ambiguity,
                        opposite_sign_mask, pair_weight_mask, warp_ambiguity)
from .autoblur import AutoBlurConfig, BlurPlan, auto_blur, blur_plan, gaussian_blur, gaussian_kernel
from .errors import ArgumentError, DimensionError, DomainError, FormatError, FreqlossError
from .fairness import FairnessReport, LossCurve, compare_landscapes, fairness_degree, loss_sweep, monotone_radius
from .frequency import (GradientField, channel_frequency, directional_gradients, freq_map_centered,
                        freq_map_one_sided, to_luminance)
from .geometry import Intrinsics, Pose, disparity_sampler, load_calibration, reconstruct, reprojection_sampler
from .imgcore import bilinear_sample, false_color, identity_sampler, load_image, save_image
from .photometric import LossConfig, masked_mean_loss, photometric_loss_map, ssim_map, supervised_l1
from .stats import ambiguity_statistics, stats_csv
from .synth import StereoScene, make_antialiased_edge, make_fig5_scene, make_layered_pair, make_translation_pair

__version__ = "0.1.0"
