//! Generate a random 3-regular graph, round-trip it through both file
//! formats and solve it exhaustively.

use xqaoa::graph::{
    brute_force_maxcut, generate_regular, load_edge_list_mapped, save_edge_list_with_optimum, GraphFormat,
};

fn main() -> xqaoa::Result<()> {
    let g = generate_regular(20, 3, 42)?;
    println!("n = {}, m = {}, connected = {}", g.n(), g.m(), g.is_connected());

    let best = brute_force_maxcut(&g)?;
    println!("MaxCut = {} with partition {:?}", best.cut_value, best.assignment);

    for format in [GraphFormat::Csv, GraphFormat::Json] {
        let mut buf = Vec::new();
        save_edge_list_with_optimum(&g, &mut buf, format, Some(best.cut_value))?;
        let back = load_edge_list_mapped(buf.as_slice(), format)?;
        assert_eq!(back.graph, g);
        println!("{format:?}: {} bytes, recorded optimum {:?}", buf.len(), back.recorded_optimum);
    }
    Ok(())
}
