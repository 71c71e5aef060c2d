//! Image-processing primitives used by the artifact readers.
//!
//! Everything here operates on [`ImageBuffer`], an owned 8-bit raster with
//! one (gray) or three (RGB) interleaved channels. All operations are pure
//! functions: identical inputs give bit-identical outputs, and nothing holds
//! interior state, so they can be called from any thread.
//!
//! The set of operations is deliberately small:
//!
//! - [`to_grayscale`], [`threshold`], [`gaussian_blur`], [`median_filter`]
//! - [`extract_contours`] (8-connected components with traced outer borders)
//! - [`hough_lines`] (standard rho/theta accumulator with 3x3 peak suppression)
//! - [`Homography::from_points`] and [`warp_perspective`]
//! - [`match_template_ssd`] (exhaustive sum-of-squared-differences search)
//! - [`crop_roi`]

mod buffer;
mod color;
mod contours;
mod error;
mod filter;
mod geometry;
mod homography;
mod hough;
pub mod io;
mod template;

pub use buffer::{BoundingBox, ImageBuffer, Point2};
pub use color::{crop_roi, to_grayscale};
pub use contours::{extract_contours, Contour};
pub use error::{ImagingError, Result};
pub use filter::{gaussian_blur, gaussian_kernel, median_filter, threshold, ThresholdMode};
pub use geometry::are_collinear;
pub use homography::{warp_perspective, Homography};
pub use hough::{hough_lines, PolarLine};
pub use template::{match_template_ssd, MatchResult, ScoreMap};
