fn main() { println!("{}", corner_bie::placeholder()); }
