use crown_cli::{run, EXIT_OK, EXIT_USAGE, THREADS_ENV};

#[test]
fn thread_count_falls_back_to_the_environment() {
    let exact = |extra: &[&str]| {
        let mut argv = vec!["crown", "exact", "--n", "6"];
        argv.extend_from_slice(extra);
        run(argv).exit_code
    };
    std::env::set_var(THREADS_ENV, "1");
    assert_eq!(exact(&[]), EXIT_OK);
    std::env::set_var(THREADS_ENV, "not-a-number");
    assert_eq!(exact(&[]), EXIT_USAGE);
    assert_eq!(exact(&["--threads", "2"]), EXIT_OK);
    std::env::remove_var(THREADS_ENV);
    assert_eq!(exact(&[]), EXIT_OK);
}
