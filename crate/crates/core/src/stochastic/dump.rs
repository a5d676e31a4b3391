//! Binary trajectory dumps: a little-endian header `u64 n_traj, u64 n_points, f64 dt,
//! u64 n_steps` followed by positions as f64, one trajectory after another.

use std::io::{Read, Write};

use super::langevin::Trajectory;
use crate::error::{CoreError, Result};

pub fn write_positions<W: Write>(mut out: W, trajectories: &[Trajectory], dt: f64) -> Result<()> {
    let n_points = trajectories.first().map_or(0, |t| t.positions.len());
    if trajectories.iter().any(|t| t.positions.len() != n_points) {
        return Err(CoreError::Shape { expected: format!("{n_points} points per trajectory"), found: "ragged ensemble".into() });
    }
    let io = |e: std::io::Error| CoreError::Format(e.to_string());
    out.write_all(&(trajectories.len() as u64).to_le_bytes()).map_err(io)?;
    out.write_all(&(n_points as u64).to_le_bytes()).map_err(io)?;
    out.write_all(&dt.to_le_bytes()).map_err(io)?;
    out.write_all(&(n_points.saturating_sub(1) as u64).to_le_bytes()).map_err(io)?;
    for t in trajectories {
        for x in &t.positions {
            out.write_all(&x.to_le_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionDump {
    pub dt: f64,
    pub n_steps: u64,
    pub positions: Vec<Vec<f64>>,
}

pub fn read_positions<R: Read>(mut input: R) -> Result<PositionDump> {
    let mut word = [0u8; 8];
    let mut next = |input: &mut R| -> Result<[u8; 8]> {
        input.read_exact(&mut word).map_err(|e| CoreError::Format(format!("truncated dump: {e}")))?;
        Ok(word)
    };
    let n_traj = u64::from_le_bytes(next(&mut input)?);
    let n_points = u64::from_le_bytes(next(&mut input)?);
    let dt = f64::from_le_bytes(next(&mut input)?);
    let n_steps = u64::from_le_bytes(next(&mut input)?);
    let mut positions = Vec::with_capacity(n_traj.min(1 << 20) as usize);
    for _ in 0..n_traj {
        let row = (0..n_points).map(|_| next(&mut input).map(f64::from_le_bytes)).collect::<Result<Vec<_>>>()?;
        positions.push(row);
    }
    Ok(PositionDump { dt, n_steps, positions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{simulate_indexed, InitialCondition, LangevinParams, PotentialSpec, Schedule};

    #[test]
    fn round_trip() {
        let u = PotentialSpec::Harmonic { stiffness: Schedule::constant(1.0) };
        let p = LangevinParams { friction: 1.0, kt: 1.0, dt: 0.01, seed: 2, n_steps: 17 };
        let trajs: Vec<_> = (0..3).map(|i| simulate_indexed(&u, &p, InitialCondition::Equilibrium, i).unwrap()).collect();
        let mut buf = Vec::new();
        write_positions(&mut buf, &trajs, p.dt).unwrap();
        assert_eq!(buf.len(), 32 + 3 * 18 * 8);
        let back = read_positions(buf.as_slice()).unwrap();
        assert_eq!(back.n_steps, 17);
        assert_eq!(back.dt, 0.01);
        for (a, b) in back.positions.iter().zip(&trajs) {
            assert_eq!(a, &b.positions);
        }
        assert!(read_positions(&buf[..40]).is_err());
    }
}
