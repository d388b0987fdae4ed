from piezobeam.main import app

app(prog_name="piezobeam")
