fn main() {
    use logint::{expr, Precision};
    let d = Precision::new(30);
    let e = expr::parse("li2(-1/3)/2 + log(2)^2/2 + log(3)^2/4 - pi^2/36").unwrap();
    let v = expr::evaluate(&e, None, d).unwrap();
    println!("got    {}", v.to_string_digits(40));
    println!("expect 0.113291506110304231223910344988261413663938297");
    for part in ["li2(-1/3)", "log(2)^2", "log(3)^2", "pi^2"] {
        let pe = expr::parse(part).unwrap();
        println!("{part} = {}", expr::evaluate(&pe, None, d).unwrap().to_string_digits(30));
    }
}
