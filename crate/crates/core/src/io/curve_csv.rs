//! Curve files: a `model,topology,n,x_min,x_max` header record, then `index,x,y` rows.

use std::io::{Read, Write};

use crate::geometry::{Model, SampledCurve, Topology, Vec2};

use super::IoError;

pub fn write_curve<W: Write>(w: W, curve: &SampledCurve) -> Result<(), IoError> {
    let mut out = csv::WriterBuilder::new().flexible(true).from_writer(w);
    out.write_record(["model", "topology", "n", "x_min", "x_max"])?;
    out.write_record([
        curve.model.as_str().to_string(),
        curve.topology.as_str().to_string(),
        curve.len().to_string(),
        num(curve.domain.0),
        num(curve.domain.1),
    ])?;
    out.write_record(["index", "x", "y"])?;
    for (i, p) in curve.nodes.iter().enumerate() {
        out.write_record([i.to_string(), num(p.x), num(p.y)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_curve<R: Read>(r: R) -> Result<SampledCurve, IoError> {
    let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
    let mut records = rd.records();
    let mut next = |what: &str| -> Result<csv::StringRecord, IoError> {
        records.next().ok_or_else(|| IoError::Format(format!("missing {what}")))?.map_err(IoError::from)
    };
    let head = next("header")?;
    if head.get(0) != Some("model") || head.get(1) != Some("topology") || head.get(2) != Some("n") {
        return Err(IoError::Format("curve header must start with model,topology,n".into()));
    }
    let meta = next("curve description")?;
    let field = |i: usize| meta.get(i).ok_or_else(|| IoError::Format(format!("curve description lacks column {i}")));
    let model = Model::parse(field(0)?).ok_or_else(|| IoError::Format(format!("unknown model {:?}", meta.get(0))))?;
    let topology =
        Topology::parse(field(1)?).ok_or_else(|| IoError::Format(format!("unknown topology {:?}", meta.get(1))))?;
    let n: usize = parse(field(2)?)?;
    let domain = if meta.len() >= 5 { (parse(field(3)?)?, parse(field(4)?)?) } else { (0.0, 1.0) };
    let cols = next("row header")?;
    if cols.iter().collect::<Vec<_>>() != ["index", "x", "y"] {
        return Err(IoError::Format("row header must be index,x,y".into()));
    }
    let mut nodes = vec![None; n];
    for rec in records {
        let rec = rec?;
        let i: usize = parse(rec.get(0).unwrap_or(""))?;
        let slot = nodes.get_mut(i).ok_or_else(|| IoError::Format(format!("index {i} out of range")))?;
        *slot = Some(Vec2::new(parse(rec.get(1).unwrap_or(""))?, parse(rec.get(2).unwrap_or(""))?));
    }
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| IoError::Format(format!("node {i} missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledCurve::new(model, topology, nodes, domain)?)
}

/// Shortest round-trip text, switching to exponent form for very small or large magnitudes.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub(crate) fn parse<T: std::str::FromStr>(s: &str) -> Result<T, IoError> {
    s.trim().parse().map_err(|_| IoError::Format(format!("cannot parse {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let nodes: Vec<Vec2> = (0..40)
            .map(|i| {
                let a = i as f64 * 0.157;
                Vec2::new(0.3 * a.cos() + 1e-17, 0.1 / 3.0 * a.sin() * 1e-5)
            })
            .collect();
        let c = SampledCurve::new(Model::Disk, Topology::Closed, nodes, (-2.0, 2.0)).unwrap();
        let mut buf = Vec::new();
        write_curve(&mut buf, &c).unwrap();
        let back = read_curve(buf.as_slice()).unwrap();
        assert_eq!(back, c);
        assert!(String::from_utf8(buf).unwrap().starts_with("model,topology,n"));
    }

    #[test]
    fn rejects_missing_nodes() {
        let text = "model,topology,n\ndisk,open,10\nindex,x,y\n0,0,0\n";
        assert!(matches!(read_curve(text.as_bytes()), Err(IoError::Format(_))));
    }
}
