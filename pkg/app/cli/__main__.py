from app.cli.main import main

main(prog_name="affvir")
