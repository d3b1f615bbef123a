//! Imageless concealed-object detection with a rotating two-element
//! interferometer.
//!
//! A rotating antenna pair samples the scene's visibility on a single ring
//! in the `uv`-plane. The ring carries almost no spatial information, so no
//! usable image can be formed from it, yet simple statistics of the ring
//! samples are enough to tell a person carrying a metal object from one who
//! is not.
//!
//! Modules, bottom-up:
//!
//! - [`scene`]: direction-cosine scenes built from shapes.
//! - [`visibility`]: scene/visibility transforms, gridding, PSFs.
//! - [`dynarray`]: static and rotating array sampling.
//! - [`aimsim`]: time-domain noise-illumination and correlation model.
//! - [`features`]: the eleven ring statistics and their normalization.
//! - [`classify`]: threshold, KNN and RBF-SVM classifiers.
//! - [`evaluate`]: metrics, Monte Carlo, ROC, SSIM, timing.
//! - [`synth`]: the synthetic person / person-with-object dataset.
//! - [`formats`]: MWGRID, RINGCSV and FEATCSV files.
//! - [`config`] and [`commands`]: the run configuration and the CLI's
//!   subcommands as functions.
//!
//! The `examples/` directory has one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod aimsim;
pub mod classify;
pub mod commands;
pub mod config;
pub mod dynarray;
pub mod error;
pub mod evaluate;
pub mod features;
pub mod formats;
pub mod grid;
pub mod scene;
pub mod seed;
pub mod synth;
pub mod visibility;

pub use error::{Error, Result};
