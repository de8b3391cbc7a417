//! Geodesic distance, spatial scores, and kernel-density grids.
//!
//! Distances are great-circle (haversine) on a sphere of radius
//! 6371.0088 km. The spatial score of a leader–participant pair is
//! `log10(max(distance_km, 1)) + lambda * [cross_border]`: the 1 km floor
//! keeps co-located institutions from producing a divergent log, and the
//! cross-border term is a field-specific additive shift.

use rayon::prelude::*;
use thiserror::Error;

use crate::fmt::sig12;

/// Mean Earth radius in kilometers (IUGG).
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Distances at or below this floor contribute a spatial score of zero.
pub const DISTANCE_FLOOR_KM: f64 = 1.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("longitude {0} outside [-180, 180]")]
    LongitudeOutOfRange(f64),
    #[error("bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("grid needs positive rows and cols, got {rows}x{cols}")]
    InvalidGridShape { rows: usize, cols: usize },
    #[error("grid bounds empty: lat [{lat_min}, {lat_max}], lon [{lon_min}, {lon_max}]")]
    InvalidBounds {
        lat_min: f64,
        lat_max: f64,
        lon_min: f64,
        lon_max: f64,
    },
}

/// A point on the sphere, in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    /// Builds a point, rejecting coordinates outside the valid ranges.
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        if !(-90.0..=90.0).contains(&lat) || !lat.is_finite() {
            return Err(GeoError::LatitudeOutOfRange(lat));
        }
        if !(-180.0..=180.0).contains(&lon) || !lon.is_finite() {
            return Err(GeoError::LongitudeOutOfRange(lon));
        }
        Ok(Self { lat, lon })
    }
}

/// Great-circle distance between two points in kilometers.
pub fn haversine_km(p: GeoPoint, q: GeoPoint) -> f64 {
    let lat1 = p.lat.to_radians();
    let lat2 = q.lat.to_radians();
    let dlat = (q.lat - p.lat).to_radians();
    let dlon = (q.lon - p.lon).to_radians();

    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    // h can exceed 1 by a rounding error for antipodal points; clamp before asin.
    let central = 2.0 * h.min(1.0).sqrt().asin();
    EARTH_RADIUS_KM * central
}

/// Spatial score of a single leader–participant pair.
///
/// Monotone non-decreasing in distance; flipping `cross_border` shifts the
/// score by exactly `lambda`.
pub fn spatial_score_pair(distance_km: f64, cross_border: bool, lambda: f64) -> f64 {
    let floored = distance_km.max(DISTANCE_FLOOR_KM);
    floored.log10() + if cross_border { lambda } else { 0.0 }
}

/// A rectangular density grid. Values are row-major with row 0 the
/// northernmost band and columns running west to east.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
    pub rows: usize,
    pub cols: usize,
    pub bandwidth_km: f64,
    values: Vec<f64>,
}

impl DensityGrid {
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Center of a cell: rows count down from `lat_max`, columns up from
    /// `lon_min`.
    pub fn cell_center(&self, row: usize, col: usize) -> GeoPoint {
        let lat_step = (self.lat_max - self.lat_min) / self.rows as f64;
        let lon_step = (self.lon_max - self.lon_min) / self.cols as f64;
        GeoPoint {
            lat: self.lat_max - (row as f64 + 0.5) * lat_step,
            lon: self.lon_min + (col as f64 + 0.5) * lon_step,
        }
    }

    /// Serializes the grid: a header line
    /// `lat_min,lat_max,lon_min,lon_max,rows,cols,bandwidth_km` followed by
    /// one line per grid row, north to south.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            sig12(self.lat_min),
            sig12(self.lat_max),
            sig12(self.lon_min),
            sig12(self.lon_max),
            self.rows,
            self.cols,
            sig12(self.bandwidth_km)
        ));
        for row in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|col| sig12(self.value(row, col)))
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Bounds and resolution for [`kde_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    /// Whole-globe grid at 2 degrees per cell.
    pub fn global() -> Self {
        Self {
            lat_min: -90.0,
            lat_max: 90.0,
            lon_min: -180.0,
            lon_max: 180.0,
            rows: 90,
            cols: 180,
        }
    }
}

/// Gaussian kernel density over haversine distance.
///
/// Each cell holds `sum_i w_i * exp(-d_i^2 / (2 * bandwidth^2))` where `d_i`
/// is the distance from point `i` to the cell center. Cells are evaluated
/// independently (in parallel); the per-cell sum runs in input point order,
/// so output is deterministic.
pub fn kde_grid(
    points: &[(GeoPoint, f64)],
    bandwidth_km: f64,
    spec: GridSpec,
) -> Result<DensityGrid, GeoError> {
    if !(bandwidth_km > 0.0) || !bandwidth_km.is_finite() {
        return Err(GeoError::InvalidBandwidth(bandwidth_km));
    }
    if spec.rows == 0 || spec.cols == 0 {
        return Err(GeoError::InvalidGridShape {
            rows: spec.rows,
            cols: spec.cols,
        });
    }
    if !(spec.lat_min < spec.lat_max) || !(spec.lon_min < spec.lon_max) {
        return Err(GeoError::InvalidBounds {
            lat_min: spec.lat_min,
            lat_max: spec.lat_max,
            lon_min: spec.lon_min,
            lon_max: spec.lon_max,
        });
    }

    let mut grid = DensityGrid {
        lat_min: spec.lat_min,
        lat_max: spec.lat_max,
        lon_min: spec.lon_min,
        lon_max: spec.lon_max,
        rows: spec.rows,
        cols: spec.cols,
        bandwidth_km,
        values: vec![0.0; spec.rows * spec.cols],
    };

    let denom = 2.0 * bandwidth_km * bandwidth_km;
    let cols = spec.cols;
    let centers: Vec<GeoPoint> = (0..spec.rows * spec.cols)
        .map(|i| grid.cell_center(i / cols, i % cols))
        .collect();

    grid.values = centers
        .par_iter()
        .map(|center| {
            let mut sum = 0.0;
            for &(p, w) in points {
                let d = haversine_km(p, *center);
                sum += w * (-d * d / denom).exp();
            }
            sum
        })
        .collect();

    Ok(grid)
}
