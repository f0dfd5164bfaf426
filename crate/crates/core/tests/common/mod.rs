//! Golden values shared by the integration tests.

#![allow(dead_code)]

/// `γ^{M,k}_0` for k = 2..=11, as printed (truncated to 30 decimals).
pub const TABLE1: [(u32, &str); 10] = [
    (2, "1.043894515711938297404563438509"),
    (3, "0.891541580568652696893988105635"),
    (4, "0.768619483359480556610282699590"),
    (5, "0.689533694428236052333652469748"),
    (6, "0.641881881833269966325319431727"),
    (7, "0.613974332885360734840225581982"),
    (8, "0.597899163505840636385864829837"),
    (9, "0.588751517287173610371480648659"),
    (10, "0.583598636665716799342777885260"),
    (11, "0.580722048488931420177890261674"),
];

/// `γ^{M,k}_n` for k = 2..=5 and n = 0..=10, as printed.
pub const COEFFS: [(u32, [&str; 11]); 4] = [
    (
        2,
        [
            "1.043894515711938297404563438509",
            "-0.236152886477122974860578286060",
            "0.319384120408014249249465207074",
            "-0.501294458741649566645935631332",
            "1.010739722784850417039579626049",
            "-2.544030257932552280334481508980",
            "7.666100995112318690725728704276",
            "-26.88797470534219199661349019865",
            "107.6566910334506652692812639473",
            "-484.6934692784684121614213582581",
            "2424.080089640181055133479838894",
        ],
    ),
    (
        3,
        [
            "0.891541580568652696893988105635",
            "-0.245232425193549088584910660338",
            "0.478859132334302048001657659233",
            "-1.001749939953870715953016999262",
            "2.605658110908472598918158429694",
            "-8.280181525858129142262381587973",
            "31.06687418066902031238934836818",
            "-134.2881733346003220009976922544",
            "657.6022908453450809684814267259",
            "-3601.372879333978339048317645190",
            "21824.75413023318146861252990975",
        ],
    ),
    (
        4,
        [
            "0.768619483359480556610282699590",
            "-0.181272887555709074717349472246",
            "0.482385593391270339523799620921",
            "-1.217994351127279734636351368008",
            "3.711024193639538830737880019661",
            "-13.61003278671187974663949651367",
            "58.48358113969641160388773799724",
            "-287.8121812713812744669879624051",
            "1596.153337468935239880936537014",
            "-9857.607981656058667385016103321",
            "67147.71869990596717226860751284",
        ],
    ),
    (
        5,
        [
            "0.689533694428236052333652469748",
            "-0.110662327010032813709101796076",
            "0.415273869629961542853619205015",
            "-1.216297879807816360207457417664",
            "4.165641604898467635390667588548",
            "-16.90556080242211587404036520880",
            "79.86174202644288489695500264961",
            "-430.5047021058354385867335267643",
            "2605.890311019817862275989909315",
            "-17505.48225950875316901409735157",
            "129339.3988398803463345898998687",
        ],
    ),
];
