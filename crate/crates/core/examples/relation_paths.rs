//! Shortest paths in the symmetric closure between image points, and the
//! directed and complete-image conditions behind them.

use relcontract::relation::{find_path, is_complete, is_directed, FiniteRelation, SelfMap};

fn main() -> relcontract::Result<()> {
    let r = FiniteRelation::from_pairs(4, [(0, 2), (1, 2), (3, 3)])?;
    let f = SelfMap::new(vec![0, 1, 1, 0])?;
    let rs = r.symmetrize();
    let image = f.image_set();
    println!("image {image:?}");
    println!("complete on image: {}", is_complete(&r, &image).holds());
    println!("directed on image: {}", is_directed(&rs, &image).holds());
    for &a in &image {
        for &b in &image {
            match find_path(&rs, a, b) {
                Some(p) => println!("{a} -> {b}: {:?} (length {})", p.nodes(), p.length()),
                None => println!("{a} -> {b}: none"),
            }
        }
    }
    Ok(())
}
