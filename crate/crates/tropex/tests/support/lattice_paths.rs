//! Independent check of the planar enumerator: Mikhalkin's lattice path count for rational
//! curves of degree d in the plane, with λ(x, y) = x - εy.

type P = (i64, i64);

fn in_triangle(d: i64, p: P) -> bool {
    p.0 >= 0 && p.1 >= 0 && p.0 + p.1 <= d
}

fn turn(a: P, b: P, c: P) -> i64 {
    (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)
}

// left = true counts towards the hypotenuse path, left = false towards the two legs
fn mu(d: i64, path: &[P], left: bool) -> i64 {
    let target: Vec<P> = if left { (0..=d).map(|i| (i, d - i)).collect() } else { (0..=d).rev().map(|i| (0, i)).chain((1..=d).map(|i| (i, 0))).collect() };
    if path == target.as_slice() {
        return 1;
    }
    let j = (1..path.len() - 1).find(|&j| {
        let t = turn(path[j - 1], path[j], path[j + 1]);
        if left {
            t > 0
        } else {
            t < 0
        }
    });
    let Some(j) = j else { return 0 };
    let (a, b, c) = (path[j - 1], path[j], path[j + 1]);
    let area2 = turn(a, b, c).abs();
    let mut cut = path.to_vec();
    cut.remove(j);
    let mut total = area2 * mu(d, &cut, left);
    let flip = (a.0 + c.0 - b.0, a.1 + c.1 - b.1);
    if in_triangle(d, flip) {
        let mut other = path.to_vec();
        other[j] = flip;
        total += mu(d, &other, left);
    }
    total
}

pub fn lattice_path_count(d: i64) -> i64 {
    let mut pts: Vec<P> = (0..=d).flat_map(|x| (0..=d - x).map(move |y| (x, y))).collect();
    // λ-order: by x, then by decreasing y
    pts.sort_by_key(|&(x, y)| (x, -y));
    let (first, last) = (pts[0], *pts.last().unwrap());
    let inner: Vec<P> = pts[1..pts.len() - 1].to_vec();
    let steps = (3 * d - 1) as usize;
    let mut total = 0;
    for mask in 0u32..(1 << inner.len()) {
        if mask.count_ones() as usize != steps - 1 {
            continue;
        }
        let mut path = vec![first];
        path.extend(inner.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p));
        path.push(last);
        total += mu(d, &path, true) * mu(d, &path, false);
    }
    total
}
